#include <doctest.h>

#include <cmath>
#include <set>

#include "oracles.hpp"
#include "tsketch/bench.hpp"
#include "tsketch/hosvd.hpp"
#include "tsketch/matricize.hpp"
#include "tsketch/norms.hpp"
#include "tsketch/synth.hpp"

using namespace tsketch;

namespace {

PlantedTensor planted_cube(std::uint64_t d, std::uint64_t rank, double decay,
                           std::uint64_t seed) {
    TuckerSpec spec;
    spec.dims = Shape({d, d, d});
    spec.ranks = {rank, rank, rank};
    spec.core_decay = decay;
    spec.seed = seed;
    return gen_tucker(spec);
}

}  // namespace

TEST_CASE("hosvd_exact on structured tensors") {
    // superdiagonal 3x3x3 with diagonal (3,2,1): mode-1 span{e_1,e_2}
    const Shape s({3, 3, 3});
    std::vector<double> v(27, 0.0);
    v[tsketch::linear_index(s, {1, 1, 1})] = 3.0;
    v[tsketch::linear_index(s, {2, 2, 2})] = 2.0;
    v[tsketch::linear_index(s, {3, 3, 3})] = 1.0;
    const DenseTensor superdiag(s, v);
    const HosvdResult r = hosvd_exact(superdiag, 1, 2);
    const FactorBasis canonical(Matrix(3, 2, {1, 0, 0, 1, 0, 0}));
    CHECK(subspace_distance(r.basis, canonical) <= 1e-10);
    CHECK(r.method == HosvdMethod::Exact);
    CHECK(r.diagnostics.gap == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(!r.diagnostics.gap_degenerate);
    CHECK_THROWS_AS(hosvd_exact(superdiag, 1, 4), std::out_of_range);
}

TEST_CASE("degenerate gap is flagged") {
    const PlantedTensor p = planted_cube(8, 2, 1.0, 3);  // two equal core weights
    const HosvdResult r = hosvd_exact(p.tensor, 1, 1);   // g_1 = 0
    CHECK(r.diagnostics.gap <= 1e-10);
    CHECK(r.diagnostics.gap_degenerate);
    const HosvdResult r2 = hosvd_exact(p.tensor, 1, 2);  // g_2 = 1
    CHECK(!r2.diagnostics.gap_degenerate);
}

TEST_CASE("full budget makes Exact, Direct and Product agree") {
    const PlantedTensor p = planted_cube(8, 2, 0.5, 17);
    const std::uint64_t total = p.tensor.shape().total();
    const HosvdResult exact = hosvd_exact(p.tensor, 2, 2);
    const HosvdResult direct = hosvd_direct(p.tensor, total, 2, 2, 5);
    const HosvdResult product = hosvd_product(p.tensor, total, 2, 2, 5);
    CHECK(subspace_distance(exact.basis, direct.basis) <= 1e-10);
    CHECK(subspace_distance(exact.basis, product.basis) <= 1e-10);
    CHECK(subspace_distance(direct.basis, product.basis) <= 1e-10);
    CHECK(direct.diagnostics.sketch1->actual_nnz == sparsify_exact(p.tensor).nnz());
    CHECK(product.diagnostics.sketch2.has_value());
}

TEST_CASE("hosvd_direct is deterministic and improves with budget") {
    const PlantedTensor p = planted_cube(12, 1, 1.0, 23);
    const HosvdResult a = hosvd_direct(p.tensor, 300, 1, 1, 77);
    const HosvdResult b = hosvd_direct(p.tensor, 300, 1, 1, 77);
    CHECK(a.basis.columns().values() == b.basis.columns().values());

    const HosvdResult exact = hosvd_exact(p.tensor, 1, 1);
    std::vector<double> med;
    for (std::uint64_t budget : {std::uint64_t(150), std::uint64_t(600), std::uint64_t(1500)}) {
        std::vector<double> errs;
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
            const HosvdResult r = hosvd_direct(p.tensor, budget, 1, 1, seed);
            errs.push_back(subspace_distance(r.basis, exact.basis));
        }
        med.push_back(median(errs));
    }
    CHECK(med[1] < med[0]);
    CHECK(med[2] < med[1]);
}

TEST_CASE("direct diagnostics carry the exact eigengap and the sketch report") {
    const PlantedTensor p = planted_cube(10, 2, 0.5, 31);
    const HosvdResult r = hosvd_direct(p.tensor, 200, 1, 2, 3);
    CHECK(r.diagnostics.gap ==
          doctest::Approx(eigengap(matricize(p.tensor, 1), 2)).epsilon(1e-12));
    CHECK(r.diagnostics.sketch1->budget_n == 200);
    CHECK(r.diagnostics.sketch1->seed == 3);
}

TEST_CASE("product diagnostics carry the squared-spectrum gap and both reports") {
    const PlantedTensor p = planted_cube(10, 2, 0.5, 37);
    const HosvdResult r = hosvd_product(p.tensor, 200, 1, 2, 9);
    // g_2(M M^T) = sigma_2^2 - sigma_3^2 = 0.25 at zero noise
    CHECK(r.diagnostics.gap == doctest::Approx(0.25).epsilon(1e-9));
    REQUIRE(r.diagnostics.sketch1.has_value());
    REQUIRE(r.diagnostics.sketch2.has_value());
    CHECK(r.diagnostics.sketch1->seed == rng::derive_seed(9, rng::kChildSketch1));
    CHECK(r.diagnostics.sketch2->seed == rng::derive_seed(9, rng::kChildSketch2));
    CHECK(r.diagnostics.sketch1->seed != r.diagnostics.sketch2->seed);
}

TEST_CASE("sketch perturbation bound controls the direct subspace error") {
    const PlantedTensor p = planted_cube(9, 2, 0.5, 41);
    const Matrix m_exact = matricize(p.tensor, 1);
    const double gap = eigengap(m_exact, 2);
    REQUIRE(gap > 1e-6);
    const HosvdResult exact = hosvd_exact(p.tensor, 1, 2);
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        auto [sketch, report] = sparsify(p.tensor, 250, seed);
        const Matrix m_sketch = matricize(densify(sketch), 1);
        Matrix delta(m_exact.rows(), m_exact.cols());
        for (std::uint64_t i = 0; i < delta.values().size(); ++i)
            delta.values()[i] = m_sketch.values()[i] - m_exact.values()[i];
        const double delta_norm = matrix_svd(delta).singular_values[0];
        const FactorBasis direct = direct_basis_from_sketch(sketch, 1, 2);
        const double measured = subspace_distance(direct, exact.basis);
        CHECK(measured <= 2.0 * delta_norm / gap + 1e-12);
    }
}

TEST_CASE("product beats direct at equal budget on a fat-matricization instance") {
    const PlantedTensor p = planted_cube(16, 2, 0.5, 53);
    const HosvdResult exact = hosvd_exact(p.tensor, 1, 2);
    std::vector<double> direct_errs, product_errs;
    const std::uint64_t budget = 400;  // well under total: the noise-dominated regime
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        direct_errs.push_back(subspace_distance(
            hosvd_direct(p.tensor, budget, 1, 2, seed).basis, exact.basis));
        product_errs.push_back(subspace_distance(
            hosvd_product(p.tensor, budget, 1, 2, seed).basis, exact.basis));
    }
    CHECK(median(product_errs) <= median(direct_errs));
}

TEST_CASE("sparse product path matches a dense-product oracle") {
    const PlantedTensor p = planted_cube(7, 2, 0.5, 71);
    const std::uint64_t n = 120;
    auto [s1, r1] = sparsify(p.tensor, n, rng::derive_seed(9, rng::kChildSketch1));
    auto [s2, r2] = sparsify(p.tensor, n, rng::derive_seed(9, rng::kChildSketch2));
    const FactorBasis fast = product_basis_from_sketches(s1, s2, 2, 2);

    // oracle route: densify both sketches, multiply densely, Gram projector
    const Matrix m1 = matricize(densify(s1), 2);
    const Matrix m2 = matricize(densify(s2), 2);
    const Matrix product = oracles::mat_mul(m1, m2.transposed());
    CHECK(product.rows() == 7);
    double asym = 0.0;  // finite budgets: the product is not symmetric
    for (std::uint64_t i = 0; i < 7; ++i)
        for (std::uint64_t j = 0; j < 7; ++j)
            asym = std::max(asym, std::fabs(product.at(i, j) - product.at(j, i)));
    CHECK(asym > 1e-8);

    const FactorBasis slow = top_left_singular_vectors(product, 2);
    CHECK(subspace_distance(fast, slow) <= 1e-9);
}

TEST_CASE("hosvd_product is a pure function of its arguments") {
    const PlantedTensor p = planted_cube(6, 1, 1.0, 73);
    const HosvdResult a = hosvd_product(p.tensor, 80, 1, 1, 12);
    const HosvdResult b = hosvd_product(p.tensor, 80, 1, 1, 12);
    CHECK(a.basis.columns().values() == b.basis.columns().values());
    const HosvdResult c = hosvd_product(p.tensor, 80, 1, 1, 13);
    CHECK(a.basis.columns().values() != c.basis.columns().values());
}

TEST_CASE("the two product sketches are independent on the small regime") {
    // uniform-magnitude tensor: every entry is Small at this budget
    const Shape shape({8, 8, 8});
    std::vector<double> v(shape.total());
    for (std::uint64_t i = 0; i < v.size(); ++i)
        v[i] = rng::per_entry_uniform(3, i) < 0.5 ? 1.0 : -1.0;
    const DenseTensor flat(shape, v);
    const std::uint64_t n = 128;
    const double p_small = static_cast<double>(n) / static_cast<double>(shape.total());

    std::uint64_t both = 0, draws = 0;
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        const std::uint64_t s1 = rng::derive_seed(seed, rng::kChildSketch1);
        const std::uint64_t s2 = rng::derive_seed(seed, rng::kChildSketch2);
        auto [sk1, r1] = sparsify(flat, n, s1);
        auto [sk2, r2] = sparsify(flat, n, s2);
        CHECK(r1.small.candidates == shape.total());
        std::set<std::uint64_t> support1;
        for (const auto& e : sk1.entries()) support1.insert(e.index);
        for (const auto& e : sk2.entries()) both += support1.count(e.index);
        draws += shape.total();
    }
    const double rate = static_cast<double>(both) / static_cast<double>(draws);
    const double expect = p_small * p_small;
    const double se = std::sqrt(expect * (1.0 - expect) / static_cast<double>(draws));
    CHECK(std::fabs(rate - expect) <= 3.0 * se);
}
