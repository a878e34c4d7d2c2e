#include <doctest.h>
#include <omp.h>

#include <cmath>
#include <sstream>

#include "oracles.hpp"
#include "tsketch/bench.hpp"
#include "tsketch/json_io.hpp"
#include "tsketch/norms.hpp"

using namespace tsketch;

namespace {

SweepPlan tiny_plan() {
    SweepPlan plan;
    TuckerSpec spec;
    spec.dims = Shape({8, 8, 8});
    spec.ranks = {1, 1, 1};
    spec.seed = 3;
    plan.generator = spec;
    plan.budgets = {64, 128, 256};
    plan.trials = 3;
    plan.modes = {1};
    plan.ranks = {1};
    plan.estimator.restarts = 4;
    plan.estimator.max_iters = 80;
    plan.estimator.tol = 1e-7;
    plan.seed = 11;
    return plan;
}

std::vector<SweepRecord> synthetic_records(const std::vector<std::uint64_t>& budgets,
                                           double c, double exponent) {
    std::vector<SweepRecord> records;
    for (std::uint64_t b : budgets) {
        SweepRecord r;
        r.budget_n = b;
        r.rel_spectral_error = c * std::pow(static_cast<double>(b), exponent);
        r.nnz = b;
        records.push_back(r);
    }
    return records;
}

}  // namespace

TEST_CASE("fit_loglog_slope on constructed power laws") {
    const std::vector<std::uint64_t> budgets = {100, 200, 400, 800, 1600};
    const SlopeFit half = fit_loglog_slope(synthetic_records(budgets, 3.0, -0.5),
                                           SweepField::RelSpectralError);
    CHECK(half.slope == doctest::Approx(-0.5).epsilon(1e-12));
    CHECK(half.r_squared == doctest::Approx(1.0).epsilon(1e-12));

    const SlopeFit one = fit_loglog_slope(synthetic_records(budgets, 0.7, -1.0),
                                          SweepField::RelSpectralError);
    CHECK(one.slope == doctest::Approx(-1.0).epsilon(1e-12));

    CHECK_THROWS_AS(fit_loglog_slope(synthetic_records({100, 200}, 1.0, -0.5),
                                     SweepField::RelSpectralError),
                    NumericalError);
    CHECK_THROWS_AS(fit_loglog_slope(synthetic_records(budgets, 1.0, 0.0),
                                     SweepField::RelSpectralError),
                    NumericalError);  // constant medians
    CHECK_THROWS_AS(fit_loglog_slope(synthetic_records(budgets, 0.0, -0.5),
                                     SweepField::RelSpectralError),
                    NumericalError);  // zero medians
}

TEST_CASE("high_accuracy_budgets selection and fallback") {
    const std::vector<std::uint64_t> budgets = {100, 200, 400, 800, 1600};
    // errors 1/sqrt(n): thresholds pick the tail
    auto records = synthetic_records(budgets, 1.0, -0.5);
    // sr=1, d_max=20, k=3 -> threshold 20^{-1/2} = 0.2236: qualifies n >= 20
    const auto all = high_accuracy_budgets(records, 1.0, 20, 3);
    CHECK(all == budgets);
    // impossible threshold -> largest half fallback (3 of 5)
    const auto fallback = high_accuracy_budgets(records, 1e-9, 20, 3);
    CHECK(fallback == std::vector<std::uint64_t>{400, 800, 1600});
}

TEST_CASE("run_budget_sweep row structure and full-budget row") {
    SweepPlan plan = tiny_plan();
    plan.budgets = {256, 512};  // 512 == total: exact sketch
    const DenseTensor input = load_plan_input(plan);
    const auto records = run_budget_sweep(plan, input);
    REQUIRE(records.size() == 2 * 3);
    for (const auto& r : records) {
        CHECK(r.subspace_errors.size() == 1);
        CHECK(r.rel_spectral_error >= 0.0);
        if (r.budget_n == 512) {
            CHECK(r.rel_spectral_error == 0.0);
            CHECK(r.nnz == sparsify_exact(input).nnz());
            CHECK(r.subspace_errors[0] <= 1e-10);
        }
    }
    // trial seeds derive from (plan seed, budget, trial index) only
    CHECK(records[0].trial_seed == sweep_trial_seed(plan.seed, 256, 0));
    CHECK(records[5].trial_seed == sweep_trial_seed(plan.seed, 512, 2));
}

TEST_CASE("sweep CSV schema and determinism across runs and thread counts") {
    const SweepPlan plan = tiny_plan();
    const DenseTensor input = load_plan_input(plan);

    const std::string csv1 = sweep_csv(plan, run_budget_sweep(plan, input));
    std::istringstream in(csv1);
    std::string header;
    std::getline(in, header);
    CHECK(header ==
          "budget_n,trial_seed,nnz,rel_spectral_error,subspace_error_mode1,wall_time_ms,"
          "estimator_converged");
    std::size_t rows = 0;
    std::string line;
    while (std::getline(in, line)) ++rows;
    CHECK(rows == plan.budgets.size() * plan.trials);

    const std::string csv2 = sweep_csv(plan, run_budget_sweep(plan, input));
    const int saved = omp_get_max_threads();
    omp_set_num_threads(1);
    const std::string csv3 = sweep_csv(plan, run_budget_sweep(plan, input));
    omp_set_num_threads(4);
    const std::string csv4 = sweep_csv(plan, run_budget_sweep(plan, input));
    omp_set_num_threads(saved);

    CHECK(mask_wall_time(csv1) == mask_wall_time(csv2));
    CHECK(mask_wall_time(csv1) == mask_wall_time(csv3));
    CHECK(mask_wall_time(csv1) == mask_wall_time(csv4));
    CHECK(csv1 != mask_wall_time(csv1));  // wall times are real in the output
}

TEST_CASE("median relative error decreases with the budget") {
    SweepPlan plan;
    TuckerSpec spec;
    spec.dims = Shape({12, 12, 12});
    spec.ranks = {1, 1, 1};
    spec.seed = 5;
    plan.generator = spec;
    plan.budgets = {200, 800, 1600};  // below total; at n >= total the error is exactly 0
    plan.trials = 10;
    plan.estimator.restarts = 4;
    plan.estimator.max_iters = 80;
    plan.estimator.tol = 1e-7;
    plan.seed = 31;
    const DenseTensor input = load_plan_input(plan);
    const auto records = run_budget_sweep(plan, input);
    std::vector<double> medians;
    for (std::uint64_t b : plan.budgets) {
        std::vector<double> errs;
        for (const auto& r : records)
            if (r.budget_n == b) errs.push_back(r.rel_spectral_error);
        medians.push_back(median(errs));
    }
    CHECK(medians[1] < medians[0]);
    CHECK(medians[2] < medians[1]);
}

TEST_CASE("median nnz stays inside the budget band") {
    SweepPlan plan = tiny_plan();
    plan.budgets = {64, 128};
    plan.trials = 5;
    const DenseTensor input = load_plan_input(plan);
    const auto records = run_budget_sweep(plan, input);
    for (std::uint64_t b : plan.budgets) {
        std::vector<double> nnzs;
        for (const auto& r : records)
            if (r.budget_n == b) nnzs.push_back(static_cast<double>(r.nnz));
        const double med = median(nnzs);
        CHECK(med >= 0.3 * static_cast<double>(b));
        CHECK(med <= 2.0 * static_cast<double>(b));
    }
}

TEST_CASE("plan json round trip and validation") {
    const std::string text = R"({
        "input": {"generator": {"dims": [8,8,8], "ranks": [1,1,1], "seed": 3}},
        "budgets": [64, 128, 256],
        "trials": 3,
        "modes": [1],
        "ranks": [1],
        "estimator": {"restarts": 4, "max_iters": 80, "tol": 1e-7},
        "seed": 11,
        "output": "out.csv"
    })";
    const SweepPlan plan = sweep_plan_from_json(nlohmann::json::parse(text));
    CHECK(plan.budgets == std::vector<std::uint64_t>{64, 128, 256});
    CHECK(plan.trials == 3);
    CHECK(plan.generator.has_value());
    CHECK(plan.output == "out.csv");

    SweepPlan bad = plan;
    bad.budgets = {64, 64};
    CHECK_THROWS_AS(validate(bad), std::invalid_argument);
    bad = plan;
    bad.trials = 0;
    CHECK_THROWS_AS(validate(bad), std::invalid_argument);
    bad = plan;
    bad.input_file = "also.dten";  // both inputs set
    CHECK_THROWS_AS(validate(bad), std::invalid_argument);
    bad = plan;
    bad.generator.reset();  // neither input
    CHECK_THROWS_AS(validate(bad), std::invalid_argument);
    bad = plan;
    bad.ranks = {1, 2};
    CHECK_THROWS_AS(validate(bad), std::invalid_argument);
}

TEST_CASE("compare_direct_vs_product basics") {
    TuckerSpec spec;
    spec.dims = Shape({8, 8, 8});
    spec.ranks = {2, 2, 2};
    spec.core_decay = 0.5;
    spec.seed = 17;
    const DenseTensor a = gen_tucker(spec).tensor;

    const auto rows = compare_direct_vs_product(a, {512}, 1, 2, 8, 7);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].budget == 512);
    CHECK(rows[0].direct_median <= 1e-10);   // full budget
    CHECK(rows[0].product_median <= 1e-10);
    CHECK(rows[0].direct_iqr_lo <= rows[0].direct_iqr_hi);
    CHECK(rows[0].product_iqr_lo <= rows[0].product_iqr_hi);

    // degenerate gap refused with the gap named
    spec.core_decay = 1.0;  // sigma_1 == sigma_2 -> g_1 = 0
    const DenseTensor flat = gen_tucker(spec).tensor;
    CHECK_THROWS_WITH_AS(compare_direct_vs_product(flat, {100}, 1, 1, 4, 7),
                         doctest::Contains("eigengap"), NumericalError);
}

TEST_CASE("non-converged estimator rows are kept and flagged") {
    SweepPlan plan = tiny_plan();
    plan.budgets = {64};
    plan.trials = 2;
    plan.estimator.max_iters = 1;  // one sweep can never satisfy the tolerance
    plan.estimator.tol = 1e-15;
    const DenseTensor input = load_plan_input(plan);
    const auto records = run_budget_sweep(plan, input);
    REQUIRE(records.size() == 2);
    for (const auto& r : records) {
        CHECK(!r.estimator_converged);
        CHECK(r.rel_spectral_error > 0.0);  // still a valid lower-bound measurement
    }
    const std::string csv = sweep_csv(plan, records);
    CHECK(csv.find(",0\n") != std::string::npos);  // flag lands in the last column
}

TEST_CASE("sweep errors surface as exceptions, not crashes") {
    SweepPlan plan = tiny_plan();
    plan.modes = {1};
    plan.ranks = {100};  // rank > d_1
    const DenseTensor input = load_plan_input(plan);
    CHECK_THROWS_AS(run_budget_sweep(plan, input), std::out_of_range);

    SweepPlan zero = tiny_plan();
    zero.modes.clear();
    zero.ranks.clear();
    const DenseTensor zeros = DenseTensor::zeros(Shape({8, 8, 8}));
    CHECK_THROWS_AS(run_budget_sweep(zero, zeros), NumericalError);
}
