#pragma once

#include <optional>
#include <string>

#include "tsketch/sketch.hpp"
#include "tsketch/spectral.hpp"
#include "tsketch/synth.hpp"

namespace tsketch {

struct EstimatorSettings {
    std::uint64_t restarts = 10;
    std::uint64_t max_iters = 200;
    double tol = 1e-9;
};

/// One (budget, trial) measurement row.
struct SweepRecord {
    std::uint64_t budget_n = 0;
    std::uint64_t trial_seed = 0;
    std::uint64_t nnz = 0;
    double rel_spectral_error = 0.0;        // ||sketch - A||_est / ||A||_est
    std::vector<double> subspace_errors;    // one per requested mode
    double wall_time_ms = 0.0;
    bool estimator_converged = true;
};

struct SweepPlan {
    std::optional<std::string> input_file;      // exactly one of these two
    std::optional<TuckerSpec> generator;
    std::vector<std::uint64_t> budgets;         // strictly increasing
    std::uint64_t trials = 1;
    std::vector<std::uint64_t> modes;           // parallel to ranks
    std::vector<std::uint64_t> ranks;
    EstimatorSettings estimator;
    std::uint64_t seed = 0;
    std::string output;                         // default CSV path, may be empty
};

void validate(const SweepPlan& plan);
DenseTensor load_plan_input(const SweepPlan& plan);

/// Trial randomness derives solely from (plan seed, budget value, trial index).
std::uint64_t sweep_trial_seed(std::uint64_t plan_seed, std::uint64_t budget,
                               std::uint64_t trial);

/// For every (budget, trial): sparsify, measure the relative spectral error
/// of the sketch (same estimator settings and restart seeds for numerator and
/// denominator; exact SVD when k = 2), and optionally the per-mode Direct
/// subspace errors. Rows are never dropped; estimator non-convergence is
/// flagged in-row.
std::vector<SweepRecord> run_budget_sweep(const SweepPlan& plan, const DenseTensor& input);

/// Fixed column order: budget_n, trial_seed, nnz, rel_spectral_error,
/// subspace_error_mode<j>..., wall_time_ms, estimator_converged.
std::string sweep_csv(const SweepPlan& plan, const std::vector<SweepRecord>& records);

/// CSV with the wall_time_ms column zeroed; the determinism check compares
/// these bytes.
std::string mask_wall_time(const std::string& csv);

enum class SweepField { RelSpectralError, Nnz, SubspaceError };

struct SlopeFit {
    double slope = 0.0;
    double r_squared = 0.0;
};

/// Least-squares slope of log(median field) against log(budget).
/// mode_pos selects the subspace column when field == SubspaceError.
SlopeFit fit_loglog_slope(const std::vector<SweepRecord>& records, SweepField field,
                          std::uint64_t mode_pos = 0);

/// Budgets whose median relative error is below sr * d_max^(1 - k/2); falls
/// back to the largest half of the budgets when fewer than 3 qualify.
std::vector<std::uint64_t> high_accuracy_budgets(const std::vector<SweepRecord>& records,
                                                 double stable_rank_estimate,
                                                 std::uint64_t d_max, std::uint64_t k);

struct CompareRow {
    std::uint64_t budget = 0;
    double direct_median = 0.0, direct_iqr_lo = 0.0, direct_iqr_hi = 0.0;
    double product_median = 0.0, product_iqr_lo = 0.0, product_iqr_hi = 0.0;
};

/// Head-to-head Direct vs Product subspace error at equal budget parameter,
/// medians over `trials` seed pairs with bootstrap interquartile ranges.
/// Refuses gap-degenerate inputs.
std::vector<CompareRow> compare_direct_vs_product(const DenseTensor& a,
                                                  const std::vector<std::uint64_t>& budgets,
                                                  std::uint64_t mode, std::uint64_t rank,
                                                  std::uint64_t trials, std::uint64_t seed);

double median(std::vector<double> values);  // by value: sorts a copy

}  // namespace tsketch
