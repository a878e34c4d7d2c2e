#pragma once

#include <json.hpp>

#include "tsketch/bench.hpp"
#include "tsketch/hosvd.hpp"
#include "tsketch/sketch.hpp"
#include "tsketch/spectral.hpp"
#include "tsketch/synth.hpp"

namespace tsketch {

nlohmann::json to_json(const SketchReport& report);
nlohmann::json to_json(const NormEstimate& estimate);
nlohmann::json to_json(const HosvdDiagnostics& diagnostics);
nlohmann::json to_json(const TuckerSpec& spec);

TuckerSpec tucker_spec_from_json(const nlohmann::json& j);
SweepPlan sweep_plan_from_json(const nlohmann::json& j);

}  // namespace tsketch
