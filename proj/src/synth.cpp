#include "tsketch/synth.hpp"

#include <cmath>

#include "tsketch/linalg.hpp"
#include "tsketch/rng.hpp"

namespace tsketch {

namespace {

constexpr std::uint64_t kFactorTag = 0xFAC7000000000000ull;
constexpr std::uint64_t kNoiseTag = 0x7015E00000000000ull;

}  // namespace

void validate(const TuckerSpec& spec) {
    const std::uint64_t k = spec.dims.order();
    if (k == 0) throw std::invalid_argument("tucker spec: empty shape");
    if (k > 16) throw std::invalid_argument("tucker spec: order capped at 16");
    if (spec.ranks.size() != k)
        throw std::invalid_argument("tucker spec: ranks arity mismatch");
    for (std::uint64_t j = 0; j < k; ++j)
        if (spec.ranks[j] < 1 || spec.ranks[j] > spec.dims.dims()[j])
            throw std::invalid_argument("tucker spec: rank out of range for mode " +
                                        std::to_string(j + 1));
    if (!(spec.core_decay > 0.0) || spec.core_decay > 1.0)
        throw std::invalid_argument("tucker spec: core_decay must be in (0, 1]");
    if (spec.noise_sigma < 0.0)
        throw std::invalid_argument("tucker spec: noise_sigma must be >= 0");
}

PlantedTensor gen_tucker(const TuckerSpec& spec, kernels::Exec exec) {
    validate(spec);
    const std::uint64_t k = spec.dims.order();
    const auto& dims = spec.dims.dims();
    const std::uint64_t total = spec.dims.total();

    std::vector<FactorBasis> factors;
    factors.reserve(k);
    for (std::uint64_t j = 0; j < k; ++j) {
        const std::uint64_t stream = rng::derive_seed(spec.seed, kFactorTag + j);
        Matrix g(dims[j], spec.ranks[j]);
        for (std::uint64_t i = 0; i < dims[j]; ++i)
            for (std::uint64_t c = 0; c < spec.ranks[j]; ++c)
                g.at(i, c) = rng::gaussian(stream, i * spec.ranks[j] + c);
        linalg::orthonormalize_columns(g);
        factors.emplace_back(std::move(g));
    }

    std::uint64_t core_len = spec.ranks[0];
    for (std::uint64_t j = 1; j < k; ++j) core_len = std::min(core_len, spec.ranks[j]);
    std::vector<double> weight(core_len);
    for (std::uint64_t t = 0; t < core_len; ++t) weight[t] = std::pow(spec.core_decay, t);

    const std::uint64_t noise_stream = rng::derive_seed(spec.seed, kNoiseTag);
    const double noise_scale = spec.noise_sigma / std::sqrt(static_cast<double>(total));

    std::vector<double> values(total);
#pragma omp parallel for schedule(static) if (exec == kernels::Exec::Parallel)
    for (std::int64_t cell = 0; cell < static_cast<std::int64_t>(total); ++cell) {
        std::uint64_t lin = static_cast<std::uint64_t>(cell);
        // decode the multi index once
        std::uint64_t ix[16];
        for (std::uint64_t j = k; j-- > 0;) {
            ix[j] = lin % dims[j];
            lin /= dims[j];
        }
        double val = 0.0;
        for (std::uint64_t t = 0; t < core_len; ++t) {
            double prod = weight[t];
            for (std::uint64_t j = 0; j < k; ++j)
                prod *= factors[j].columns().at(ix[j], t);
            val += prod;
        }
        if (noise_scale > 0.0)
            val += noise_scale * rng::gaussian(noise_stream, static_cast<std::uint64_t>(cell));
        values[static_cast<std::uint64_t>(cell)] = val;
    }

    return {DenseTensor(spec.dims, std::move(values)), std::move(factors)};
}

PlantedMatrix gen_matrix(std::uint64_t rows, std::uint64_t cols, std::uint64_t rank,
                         double decay, double noise_sigma, std::uint64_t seed) {
    TuckerSpec spec;
    spec.dims = Shape({rows, cols});
    spec.ranks = {rank, rank};
    spec.core_decay = decay;
    spec.noise_sigma = noise_sigma;
    spec.seed = seed;
    PlantedTensor planted = gen_tucker(spec);

    std::vector<double> sv(std::min(rows, cols), 0.0);
    for (std::uint64_t t = 0; t < std::min(rank, static_cast<std::uint64_t>(sv.size())); ++t)
        sv[t] = std::pow(decay, t);

    return {Matrix(rows, cols, planted.tensor.values()), std::move(planted.factors[0]),
            std::move(sv)};
}

}  // namespace tsketch
