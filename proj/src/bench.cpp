#include "tsketch/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <map>
#include <sstream>

#include "tsketch/hosvd.hpp"
#include "tsketch/io.hpp"
#include "tsketch/matricize.hpp"
#include "tsketch/norms.hpp"
#include "tsketch/rng.hpp"

namespace tsketch {

void validate(const SweepPlan& plan) {
    if (plan.input_file.has_value() == plan.generator.has_value())
        throw std::invalid_argument("sweep plan: exactly one of input file / generator");
    if (plan.generator) validate(*plan.generator);
    if (plan.budgets.empty()) throw std::invalid_argument("sweep plan: budgets empty");
    for (std::size_t i = 0; i < plan.budgets.size(); ++i) {
        if (plan.budgets[i] < 1) throw std::invalid_argument("sweep plan: budget must be >= 1");
        if (i > 0 && plan.budgets[i] <= plan.budgets[i - 1])
            throw std::invalid_argument("sweep plan: budgets must be strictly increasing");
    }
    if (plan.trials < 1) throw std::invalid_argument("sweep plan: trials must be >= 1");
    if (plan.modes.size() != plan.ranks.size())
        throw std::invalid_argument("sweep plan: modes and ranks must pair up");
    if (!(plan.estimator.tol > 0.0) || plan.estimator.restarts < 1 ||
        plan.estimator.max_iters < 1)
        throw std::invalid_argument("sweep plan: bad estimator settings");
}

DenseTensor load_plan_input(const SweepPlan& plan) {
    validate(plan);
    if (plan.input_file) return io::read_dense(*plan.input_file);
    return gen_tucker(*plan.generator).tensor;
}

std::uint64_t sweep_trial_seed(std::uint64_t plan_seed, std::uint64_t budget,
                               std::uint64_t trial) {
    return rng::counter_word(rng::counter_word(plan_seed, budget), trial);
}

double median(std::vector<double> values) {
    if (values.empty()) throw std::invalid_argument("median of empty set");
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

namespace {

PowerSettings to_power(const EstimatorSettings& s) {
    PowerSettings p;
    p.restarts = s.restarts;
    p.max_iters = s.max_iters;
    p.tol = s.tol;
    return p;  // fixed kPowerSeed: numerator and denominator share restart seeds
}

Matrix as_matrix(const DenseTensor& t) {
    return Matrix(t.shape().dims()[0], t.shape().dims()[1], t.values());
}

double sigma1(const Matrix& m) { return matrix_svd(m).singular_values[0]; }

}  // namespace

std::vector<SweepRecord> run_budget_sweep(const SweepPlan& plan, const DenseTensor& input) {
    validate(plan);
    const std::uint64_t k = input.shape().order();
    const PowerSettings power = to_power(plan.estimator);

    double denom;
    if (k == 2)
        denom = sigma1(as_matrix(input));
    else
        denom = tensor_spectral_norm(input, power).value;
    if (!(denom > 0.0))
        throw NumericalError("budget sweep: input spectral norm estimate is zero");

    std::vector<FactorBasis> exact_bases;
    for (std::size_t m = 0; m < plan.modes.size(); ++m)
        exact_bases.push_back(
            top_left_singular_vectors(matricize(input, plan.modes[m]), plan.ranks[m]));

    const std::uint64_t rows = plan.budgets.size() * plan.trials;
    std::vector<SweepRecord> records(rows);
    std::exception_ptr failure;

#pragma omp parallel for schedule(dynamic)
    for (std::int64_t row = 0; row < static_cast<std::int64_t>(rows); ++row) {
        try {
            const std::uint64_t budget = plan.budgets[row / plan.trials];
            const std::uint64_t trial = row % plan.trials;
            SweepRecord& rec = records[row];
            const auto start = std::chrono::steady_clock::now();

            rec.budget_n = budget;
            rec.trial_seed = sweep_trial_seed(plan.seed, budget, trial);
            auto [sketch, report] = sparsify(input, budget, rec.trial_seed);
            rec.nnz = report.actual_nnz;

            const DenseTensor diff = subtract(densify(sketch), input);
            if (k == 2) {
                rec.rel_spectral_error = sigma1(as_matrix(diff)) / denom;
                rec.estimator_converged = true;
            } else {
                const NormEstimate est = tensor_spectral_norm(diff, power);
                rec.rel_spectral_error = est.value / denom;
                rec.estimator_converged = est.converged;
            }

            for (std::size_t m = 0; m < plan.modes.size(); ++m) {
                const FactorBasis basis =
                    direct_basis_from_sketch(sketch, plan.modes[m], plan.ranks[m]);
                rec.subspace_errors.push_back(subspace_distance(basis, exact_bases[m]));
            }

            rec.wall_time_ms =
                std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                          start)
                    .count();
        } catch (...) {
#pragma omp critical
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);
    return records;
}

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

std::string sweep_csv(const SweepPlan& plan, const std::vector<SweepRecord>& records) {
    std::ostringstream out;
    out << "budget_n,trial_seed,nnz,rel_spectral_error";
    for (std::uint64_t mode : plan.modes) out << ",subspace_error_mode" << mode;
    out << ",wall_time_ms,estimator_converged\n";
    for (const SweepRecord& r : records) {
        out << r.budget_n << ',' << r.trial_seed << ',' << r.nnz << ','
            << fmt(r.rel_spectral_error);
        for (double e : r.subspace_errors) out << ',' << fmt(e);
        out << ',' << fmt(r.wall_time_ms) << ',' << (r.estimator_converged ? 1 : 0) << '\n';
    }
    return out.str();
}

std::string mask_wall_time(const std::string& csv) {
    std::istringstream in(csv);
    std::ostringstream out;
    std::string line;
    std::size_t wall_col = std::string::npos;
    bool header = true;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::string cell;
        std::istringstream ls(line);
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        if (header) {
            for (std::size_t i = 0; i < cells.size(); ++i)
                if (cells[i] == "wall_time_ms") wall_col = i;
            header = false;
        } else if (wall_col < cells.size()) {
            cells[wall_col] = "0";
        }
        for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << cells[i];
        out << '\n';
    }
    return out.str();
}

namespace {

double field_value(const SweepRecord& r, SweepField field, std::uint64_t mode_pos) {
    switch (field) {
        case SweepField::RelSpectralError:
            return r.rel_spectral_error;
        case SweepField::Nnz:
            return static_cast<double>(r.nnz);
        case SweepField::SubspaceError:
            if (mode_pos >= r.subspace_errors.size())
                throw std::invalid_argument("fit: subspace column out of range");
            return r.subspace_errors[mode_pos];
    }
    return 0.0;  // unreachable
}

std::map<std::uint64_t, double> medians_per_budget(const std::vector<SweepRecord>& records,
                                                   SweepField field, std::uint64_t mode_pos) {
    std::map<std::uint64_t, std::vector<double>> groups;
    for (const SweepRecord& r : records)
        groups[r.budget_n].push_back(field_value(r, field, mode_pos));
    std::map<std::uint64_t, double> med;
    for (auto& [budget, vals] : groups) med[budget] = median(std::move(vals));
    return med;
}

}  // namespace

SlopeFit fit_loglog_slope(const std::vector<SweepRecord>& records, SweepField field,
                          std::uint64_t mode_pos) {
    const auto med = medians_per_budget(records, field, mode_pos);
    if (med.size() < 3)
        throw NumericalError("fit_loglog_slope: need >= 3 distinct budgets");
    std::vector<double> xs, ys;
    for (const auto& [budget, m] : med) {
        if (!(m > 0.0) || !std::isfinite(m))
            throw NumericalError("fit_loglog_slope: degenerate median " + fmt(m) +
                                 " at budget " + std::to_string(budget));
        xs.push_back(std::log(static_cast<double>(budget)));
        ys.push_back(std::log(m));
    }
    const std::size_t n = xs.size();
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
        syy += (ys[i] - my) * (ys[i] - my);
    }
    if (!(sxx > 0.0) || !(syy > 0.0))
        throw NumericalError("fit_loglog_slope: constant medians");
    SlopeFit fit;
    fit.slope = sxy / sxx;
    fit.r_squared = (sxy * sxy) / (sxx * syy);
    return fit;
}

std::vector<std::uint64_t> high_accuracy_budgets(const std::vector<SweepRecord>& records,
                                                 double stable_rank_estimate,
                                                 std::uint64_t d_max, std::uint64_t k) {
    const auto med = medians_per_budget(records, SweepField::RelSpectralError, 0);
    const double threshold =
        stable_rank_estimate *
        std::pow(static_cast<double>(d_max), 1.0 - static_cast<double>(k) / 2.0);
    std::vector<std::uint64_t> selected;
    for (const auto& [budget, m] : med)
        if (m <= threshold) selected.push_back(budget);
    if (selected.size() >= 3) return selected;
    // fallback: the largest half of the budgets
    std::vector<std::uint64_t> all;
    for (const auto& [budget, m] : med) all.push_back(budget);
    const std::size_t take = (all.size() + 1) / 2;
    return {all.end() - static_cast<std::ptrdiff_t>(take), all.end()};
}

std::vector<CompareRow> compare_direct_vs_product(const DenseTensor& a,
                                                  const std::vector<std::uint64_t>& budgets,
                                                  std::uint64_t mode, std::uint64_t rank,
                                                  std::uint64_t trials, std::uint64_t seed) {
    if (budgets.empty() || trials < 1)
        throw std::invalid_argument("compare: budgets and trials must be nonempty");
    const Matrix m_exact = matricize(a, mode);
    const SvdResult svd = matrix_svd(m_exact);
    if (rank < 1 || rank > m_exact.rows())
        throw std::out_of_range("compare: rank out of range");
    const std::uint64_t have = svd.singular_values.size();
    const double s_r = rank <= have ? svd.singular_values[rank - 1] : 0.0;
    const double s_r1 = rank < have ? svd.singular_values[rank] : 0.0;
    const double gap = s_r - s_r1;
    if (!(gap > kDegenerateGapRatio * svd.singular_values[0]))
        throw NumericalError("compare: eigengap g_" + std::to_string(rank) + " = " + fmt(gap) +
                             " is degenerate on the exact input");
    const FactorBasis exact = top_left_singular_vectors(m_exact, rank);

    std::vector<CompareRow> rows;
    for (std::uint64_t budget : budgets) {
        std::vector<double> direct_err(trials), product_err(trials);
#pragma omp parallel for schedule(dynamic)
        for (std::int64_t t = 0; t < static_cast<std::int64_t>(trials); ++t) {
            const std::uint64_t s = sweep_trial_seed(seed, budget, static_cast<std::uint64_t>(t));
            auto [sk, rep] = sparsify(a, budget, s);
            direct_err[t] =
                subspace_distance(direct_basis_from_sketch(sk, mode, rank), exact);
            auto [sk1, rep1] = sparsify(a, budget, rng::derive_seed(s, rng::kChildSketch1));
            auto [sk2, rep2] = sparsify(a, budget, rng::derive_seed(s, rng::kChildSketch2));
            product_err[t] = subspace_distance(
                product_basis_from_sketches(sk1, sk2, mode, rank), exact);
        }
        CompareRow row;
        row.budget = budget;
        row.direct_median = median(direct_err);
        row.product_median = median(product_err);

        // bootstrap IQR of the median
        constexpr std::uint64_t kBoot = 200;
        auto boot_iqr = [&](const std::vector<double>& errs, std::uint64_t tag, double& lo,
                            double& hi) {
            const std::uint64_t stream = rng::derive_seed(seed, tag ^ budget);
            std::vector<double> meds(kBoot);
            std::vector<double> sample(trials);
            for (std::uint64_t b = 0; b < kBoot; ++b) {
                for (std::uint64_t i = 0; i < trials; ++i)
                    sample[i] = errs[rng::counter_word(stream, b * trials + i) % trials];
                meds[b] = median(sample);
            }
            std::sort(meds.begin(), meds.end());
            lo = meds[kBoot / 4];
            hi = meds[(3 * kBoot) / 4];
        };
        boot_iqr(direct_err, 0xD112EC7ull, row.direct_iqr_lo, row.direct_iqr_hi);
        boot_iqr(product_err, 0x9120D0C7ull, row.product_iqr_lo, row.product_iqr_hi);
        rows.push_back(row);
    }
    return rows;
}

}  // namespace tsketch
