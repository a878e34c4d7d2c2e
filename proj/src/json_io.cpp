#include "tsketch/json_io.hpp"

namespace tsketch {

using nlohmann::json;

json to_json(const SketchReport& r) {
    auto counts = [](const RegimeCounts& c) {
        return json{{"candidates", c.candidates}, {"retained", c.retained}};
    };
    return json{{"budget_n", r.budget_n},
                {"seed", r.seed},
                {"counts",
                 {{"large", counts(r.large)},
                  {"moderate", counts(r.moderate)},
                  {"small", counts(r.small)}}},
                {"expected_nnz", r.expected_nnz},
                {"actual_nnz", r.actual_nnz},
                {"fro_norm_input", r.fro_norm_input}};
}

json to_json(const NormEstimate& e) {
    return json{{"value", e.value},
                {"unit_factors", e.unit_factors},
                {"restarts_used", e.restarts_used},
                {"iterations_used", e.iterations_used},
                {"converged", e.converged}};
}

json to_json(const HosvdDiagnostics& d) {
    json j{{"eigengap", d.gap}, {"gap_degenerate", d.gap_degenerate}};
    if (d.sketch1) j["sketch_report_1"] = to_json(*d.sketch1);
    if (d.sketch2) j["sketch_report_2"] = to_json(*d.sketch2);
    return j;
}

json to_json(const TuckerSpec& spec) {
    return json{{"dims", spec.dims.dims()},   {"ranks", spec.ranks},
                {"core_decay", spec.core_decay}, {"noise_sigma", spec.noise_sigma},
                {"seed", spec.seed}};
}

TuckerSpec tucker_spec_from_json(const json& j) {
    TuckerSpec spec;
    spec.dims = Shape(j.at("dims").get<std::vector<std::uint64_t>>());
    spec.ranks = j.at("ranks").get<std::vector<std::uint64_t>>();
    spec.core_decay = j.value("core_decay", 1.0);
    spec.noise_sigma = j.value("noise_sigma", 0.0);
    spec.seed = j.value("seed", std::uint64_t{0});
    validate(spec);
    return spec;
}

SweepPlan sweep_plan_from_json(const json& j) {
    SweepPlan plan;
    const json& input = j.at("input");
    if (input.contains("file")) plan.input_file = input.at("file").get<std::string>();
    if (input.contains("generator"))
        plan.generator = tucker_spec_from_json(input.at("generator"));
    plan.budgets = j.at("budgets").get<std::vector<std::uint64_t>>();
    plan.trials = j.at("trials").get<std::uint64_t>();
    plan.modes = j.value("modes", std::vector<std::uint64_t>{});
    plan.ranks = j.value("ranks", std::vector<std::uint64_t>{});
    if (j.contains("estimator")) {
        const json& e = j.at("estimator");
        plan.estimator.restarts = e.value("restarts", std::uint64_t{10});
        plan.estimator.max_iters = e.value("max_iters", std::uint64_t{200});
        plan.estimator.tol = e.value("tol", 1e-9);
    }
    plan.seed = j.value("seed", std::uint64_t{0});
    plan.output = j.value("output", std::string{});
    validate(plan);
    return plan;
}

}  // namespace tsketch
