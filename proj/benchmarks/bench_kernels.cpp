// Timing comparison of the serial reference kernels against the OpenMP
// variants. Usage: bench_kernels [dim] [repeats]

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <vector>

#include "tsketch/kernels.hpp"
#include "tsketch/matricize.hpp"
#include "tsketch/norms.hpp"
#include "tsketch/rng.hpp"
#include "tsketch/sketch.hpp"
#include "tsketch/synth.hpp"

using namespace tsketch;
using kernels::Exec;

namespace {

double seconds(const std::function<void()>& fn, int repeats) {
    const auto start = std::chrono::steady_clock::now();
    for (int r = 0; r < repeats; ++r) fn();
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count() /
           repeats;
}

void report(const char* name, double serial, double parallel) {
    std::printf("%-28s serial %9.3f ms   openmp %9.3f ms   speedup %5.2fx\n", name,
                serial * 1e3, parallel * 1e3, serial / parallel);
}

}  // namespace

int main(int argc, char** argv) {
    const std::uint64_t d = argc > 1 ? std::atoll(argv[1]) : 48;
    const int repeats = argc > 2 ? std::atoi(argv[2]) : 5;
    std::printf("tensor %llux%llux%llu, %d threads\n", (unsigned long long)d,
                (unsigned long long)d, (unsigned long long)d, omp_get_max_threads());

    TuckerSpec spec;
    spec.dims = Shape({d, d, d});
    spec.ranks = {2, 2, 2};
    spec.core_decay = 0.5;
    spec.noise_sigma = 0.5;
    spec.seed = 7;
    const DenseTensor a = gen_tucker(spec).tensor;
    const std::uint64_t budget = a.shape().total() / 8;

    report("frobenius (blocked sum)",
           seconds([&] { frobenius_norm(a, Exec::Serial); }, repeats),
           seconds([&] { frobenius_norm(a, Exec::Parallel); }, repeats));

    report("sparsify",
           seconds([&] { sparsify(a, budget, 3, Exec::Serial); }, repeats),
           seconds([&] { sparsify(a, budget, 3, Exec::Parallel); }, repeats));

    std::vector<std::vector<double>> factors;
    for (std::uint64_t j = 0; j < 3; ++j) {
        std::vector<double> u(d);
        double norm = 0.0;
        for (std::uint64_t t = 0; t < d; ++t) {
            u[t] = rng::gaussian(j + 1, t);
            norm += u[t] * u[t];
        }
        norm = std::sqrt(norm);
        for (double& x : u) x /= norm;
        factors.push_back(std::move(u));
    }
    std::vector<double> out;
    report("dense mode contraction",
           seconds([&] { kernels::mode_contract_dense(a.shape(), a.values(), 2, factors, out,
                                                      Exec::Serial); },
                   repeats),
           seconds([&] { kernels::mode_contract_dense(a.shape(), a.values(), 2, factors, out,
                                                      Exec::Parallel); },
                   repeats));

    auto [sketch, rep] = sparsify(a, budget, 3);
    const auto idx = kernels::build_sparse_mode_index(sketch);
    report("sparse mode contraction",
           seconds([&] { kernels::mode_contract_sparse(sketch, idx, 2, factors, out,
                                                       Exec::Serial); },
                   repeats),
           seconds([&] { kernels::mode_contract_sparse(sketch, idx, 2, factors, out,
                                                       Exec::Parallel); },
                   repeats));

    const kernels::SparseRows rows1 = matricize_sparse(sketch, 1);
    auto [sketch2, rep2] = sparsify(a, budget, 4);
    const kernels::SparseRows rows2 = matricize_sparse(sketch2, 1);
    report("sparse product  S1 S2^T",
           seconds([&] { kernels::spmm_abt(rows1, rows2, Exec::Serial); }, repeats),
           seconds([&] { kernels::spmm_abt(rows1, rows2, Exec::Parallel); }, repeats));

    return 0;
}
