#pragma once

#include "tsketch/spectral.hpp"
#include "tsketch/types.hpp"

namespace tsketch {

/// Planted Tucker model: superdiagonal core with diagonal core_decay^(t-1)
/// for t = 1..min(ranks), column-orthonormal factors, plus
/// noise_sigma/sqrt(total) * iid standard normal noise.
struct TuckerSpec {
    Shape dims;
    std::vector<std::uint64_t> ranks;
    double core_decay = 1.0;
    double noise_sigma = 0.0;
    std::uint64_t seed = 0;
};

void validate(const TuckerSpec& spec);

struct PlantedTensor {
    DenseTensor tensor;
    std::vector<FactorBasis> factors;  // one d_j x r_j basis per mode
};

PlantedTensor gen_tucker(const TuckerSpec& spec,
                         kernels::Exec exec = kernels::Exec::Parallel);

struct PlantedMatrix {
    Matrix matrix;
    FactorBasis left;
    std::vector<double> singular_values;  // of the noise-free plant, zero-padded
};

/// k = 2 instance of the same model; rows << cols supported.
PlantedMatrix gen_matrix(std::uint64_t rows, std::uint64_t cols, std::uint64_t rank,
                         double decay, double noise_sigma, std::uint64_t seed);

}  // namespace tsketch
