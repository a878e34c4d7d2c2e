#include "tsketch/sketch.hpp"

#include <cmath>

#include "tsketch/norms.hpp"
#include "tsketch/rng.hpp"

namespace tsketch {

Regime classify_entry(double abs_a, double fro, std::uint64_t n, std::uint64_t total) {
    if (abs_a < 0 || fro < 0 || n < 1) throw std::invalid_argument("classify_entry: bad input");
    if (fro == 0.0 && abs_a > 0.0)
        throw std::invalid_argument("classify_entry: |a| > 0 with zero Frobenius norm");
    if (abs_a >= fro / std::sqrt(static_cast<double>(n))) return Regime::Large;
    if (abs_a <= fro / std::sqrt(static_cast<double>(total))) return Regime::Small;
    return Regime::Moderate;
}

double keep_probability(double a, double fro, std::uint64_t n, std::uint64_t total) {
    switch (classify_entry(std::fabs(a), fro, n, total)) {
        case Regime::Large:
            return 1.0;
        case Regime::Moderate:
            return static_cast<double>(n) * a * a / (fro * fro);
        case Regime::Small:
            return std::min(1.0, static_cast<double>(n) / static_cast<double>(total));
    }
    return 0.0;  // unreachable
}

namespace {

std::pair<SparseTensor, SketchReport> sparsify_impl(const DenseTensor& a, std::uint64_t n,
                                                    std::uint64_t seed, bool drop_small,
                                                    kernels::Exec exec) {
    if (n < 1) throw std::invalid_argument("sparsify: budget must be >= 1");
    const std::uint64_t total = a.shape().total();
    const double fro = frobenius_norm(a, exec);

    SketchReport report;
    report.budget_n = n;
    report.seed = seed;
    report.fro_norm_input = fro;

    if (fro == 0.0)
        return {SparseTensor(a.shape(), {}), report};

    const std::uint64_t bs = kernels::kSumBlock;
    const std::uint64_t nblocks = (total + bs - 1) / bs;
    const auto& v = a.values();

    struct BlockTally {
        RegimeCounts large, moderate, small;
        std::uint64_t kept = 0;
        double expected = 0.0;
    };
    std::vector<BlockTally> tally(nblocks);

    auto decide = [&](std::uint64_t i, Regime& regime, double& p) -> bool {
        regime = classify_entry(std::fabs(v[i]), fro, n, total);
        p = keep_probability(v[i], fro, n, total);
        if (drop_small && regime == Regime::Small) return false;
        return rng::per_entry_uniform(seed, i) < p;
    };

#pragma omp parallel for schedule(static) if (exec == kernels::Exec::Parallel)
    for (std::int64_t bb = 0; bb < static_cast<std::int64_t>(nblocks); ++bb) {
        const std::uint64_t b = static_cast<std::uint64_t>(bb);
        BlockTally& t = tally[b];
        const std::uint64_t hi = std::min(total, (b + 1) * bs);
        for (std::uint64_t i = b * bs; i < hi; ++i) {
            if (v[i] == 0.0) continue;  // exact zeros are never candidates
            Regime regime;
            double p;
            const bool keep = decide(i, regime, p);
            RegimeCounts& c = regime == Regime::Large    ? t.large
                              : regime == Regime::Moderate ? t.moderate
                                                           : t.small;
            ++c.candidates;
            if (keep) {
                ++c.retained;
                ++t.kept;
            }
            if (!(drop_small && regime == Regime::Small)) t.expected += p;
        }
    }

    std::vector<std::uint64_t> offset(nblocks + 1, 0);
    for (std::uint64_t b = 0; b < nblocks; ++b) {
        offset[b + 1] = offset[b] + tally[b].kept;
        report.large.candidates += tally[b].large.candidates;
        report.large.retained += tally[b].large.retained;
        report.moderate.candidates += tally[b].moderate.candidates;
        report.moderate.retained += tally[b].moderate.retained;
        report.small.candidates += tally[b].small.candidates;
        report.small.retained += tally[b].small.retained;
        report.expected_nnz += tally[b].expected;
    }

    std::vector<SparseTensor::Entry> entries(offset[nblocks]);
#pragma omp parallel for schedule(static) if (exec == kernels::Exec::Parallel)
    for (std::int64_t bb = 0; bb < static_cast<std::int64_t>(nblocks); ++bb) {
        const std::uint64_t b = static_cast<std::uint64_t>(bb);
        std::uint64_t w = offset[b];
        const std::uint64_t hi = std::min(total, (b + 1) * bs);
        for (std::uint64_t i = b * bs; i < hi; ++i) {
            if (v[i] == 0.0) continue;
            Regime regime;
            double p;
            if (decide(i, regime, p)) entries[w++] = {i, v[i] / p};
        }
    }

    report.actual_nnz = entries.size();
    return {SparseTensor(a.shape(), std::move(entries)), report};
}

}  // namespace

std::pair<SparseTensor, SketchReport> sparsify(const DenseTensor& a, std::uint64_t n,
                                               std::uint64_t seed, kernels::Exec exec) {
    return sparsify_impl(a, n, seed, /*drop_small=*/false, exec);
}

std::pair<SparseTensor, SketchReport> sparsify_baseline_zero_small(const DenseTensor& a,
                                                                   std::uint64_t n,
                                                                   std::uint64_t seed,
                                                                   kernels::Exec exec) {
    return sparsify_impl(a, n, seed, /*drop_small=*/true, exec);
}

double expected_nnz(const DenseTensor& a, std::uint64_t n, kernels::Exec exec) {
    if (n < 1) throw std::invalid_argument("expected_nnz: budget must be >= 1");
    const double fro = frobenius_norm(a, exec);
    if (fro == 0.0) return 0.0;
    const std::uint64_t total = a.shape().total();
    const auto& v = a.values();
    return kernels::blocked_sum(
        total,
        [&](std::uint64_t i) {
            return v[i] == 0.0 ? 0.0 : keep_probability(v[i], fro, n, total);
        },
        exec);
}

}  // namespace tsketch
