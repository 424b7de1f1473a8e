#include "doctest.h"

#include <cmath>
#include <vector>

#include "mvnlab/experiments.hpp"
#include "mvnlab/families.hpp"
#include "mvnlab/morphisms.hpp"

using namespace mvnlab;
using linops::CMatrix;

namespace {

std::vector<CMatrix> random_unitaries(const AlgebraPtr& alg, Rng& rng) {
    std::vector<CMatrix> us;
    for (std::size_t k = 0; k < alg->prefix_blocks(); ++k) {
        const int d = alg->block_dim(static_cast<std::int64_t>(k));
        CMatrix m(d, d);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) m(i, j) = rng.complex_normal();
        us.push_back(linops::matrix_exp(((m - m.adjoint()) / 2.0).eval()));
    }
    return us;
}

void check_star_homomorphism(const Morphism& phi, const BlockOperator& x,
                             const BlockOperator& y) {
    CHECK(law_residual(extend_morphism(phi, x + y),
                       extend_morphism(phi, x) + extend_morphism(phi, y)) < 1e-12);
    CHECK(law_residual(extend_morphism(phi, x * y),
                       extend_morphism(phi, x) * extend_morphism(phi, y)) < 1e-12);
    CHECK(law_residual(extend_morphism(phi, x.adjoint()),
                       extend_morphism(phi, x).adjoint()) < 1e-12);
    CHECK(std::abs(tau(extend_morphism(phi, x)) - tau(x)) < 1e-12);
}

} // namespace

TEST_CASE("identity morphism") {
    const auto alg = standard_infinite_algebra();
    const auto phi = Morphism::identity(alg);
    CHECK(phi.kind() == MorphismKind::Identity);
    Rng rng(61);
    const auto x = random_hermitian(alg, rng, 1.0);
    CHECK(extend_morphism(phi, x).identical_to(x));
    // extends to unbounded affiliated elements untouched
    const auto growing =
        BlockOperator::from_scalar_formula(alg, TailFormula::monomial(Complex(1, 0), 1));
    CHECK(extend_morphism(phi, growing).identical_to(growing));
}

TEST_CASE("block permutations move whole blocks") {
    const auto alg = FiniteBlockAlgebra::make({2, 2, 3}, {0.25, 0.25, 0.5});
    const auto phi = Morphism::block_permutation(alg, {1, 0, 2});
    Rng rng(62);
    const auto x = random_hermitian(alg, rng, 1.0);
    const auto y = extend_morphism(phi, x);
    CHECK(linops::frobenius(y.block(0) - x.block(1)) == doctest::Approx(0.0));
    CHECK(linops::frobenius(y.block(1) - x.block(0)) == doctest::Approx(0.0));
    CHECK(linops::frobenius(y.block(2) - x.block(2)) == doctest::Approx(0.0));
    check_star_homomorphism(phi, x, random_hermitian(alg, rng, 1.0));
}

TEST_CASE("block permutations validate their data") {
    const auto unequal_dims = FiniteBlockAlgebra::make({2, 3}, {0.5, 0.5});
    CHECK_THROWS_WITH_AS(Morphism::block_permutation(unequal_dims, {1, 0}),
                         doctest::Contains("different dimension"), BadMorphism);

    const auto unequal_weights = FiniteBlockAlgebra::make({2, 2}, {0.3, 0.7});
    CHECK_THROWS_WITH_AS(Morphism::block_permutation(unequal_weights, {1, 0}),
                         doctest::Contains("different weight"), BadMorphism);

    const auto ok = FiniteBlockAlgebra::make({2, 2}, {0.5, 0.5});
    CHECK_THROWS_AS(Morphism::block_permutation(ok, {0, 0}), BadMorphism);
    CHECK_THROWS_AS(Morphism::block_permutation(ok, {0}), BadMorphism);
    CHECK_THROWS_AS(Morphism::block_permutation(ok, {0, 2}), BadMorphism);
}

TEST_CASE("unitary conjugation acts blockwise and preserves the trace") {
    const auto alg = standard_infinite_algebra();
    Rng rng(63);
    const auto phi = Morphism::unitary_conjugation(alg, random_unitaries(alg, rng));
    const auto x = random_hermitian(alg, rng, 1.0);
    const auto y = random_hermitian(alg, rng, 1.0);
    check_star_homomorphism(phi, x, y);
    // scalar tails are untouched
    CHECK(extend_morphism(phi, x).tail().equals(x.tail()));
}

TEST_CASE("unitary conjugation validates its data") {
    const auto alg = FiniteBlockAlgebra::make({2}, {1.0});
    CHECK_THROWS_WITH_AS(
        Morphism::unitary_conjugation(alg, {(2.0 * CMatrix::Identity(2, 2)).eval()}),
        doctest::Contains("not unitary"), BadMorphism);
    CHECK_THROWS_AS(Morphism::unitary_conjugation(alg, {CMatrix::Identity(3, 3).eval()}),
                    BadMorphism);
    CHECK_THROWS_AS(Morphism::unitary_conjugation(alg, {}), BadMorphism);
}

TEST_CASE("ampliation tensors with an identity factor") {
    const auto alg = FiniteBlockAlgebra::make({2, 3}, {0.4, 0.6});
    const auto phi = Morphism::ampliation(alg, 2);
    CHECK(phi.target()->shape_prefix() == std::vector<int>{4, 6});
    CHECK(phi.target()->weight_prefix() == alg->weight_prefix());

    Rng rng(64);
    const auto x = random_hermitian(alg, rng, 1.0);
    const auto y = extend_morphism(phi, x);
    CHECK(linops::frobenius(y.block(0) -
                            linops::kron(x.block(0), CMatrix::Identity(2, 2))) ==
          doctest::Approx(0.0));
    check_star_homomorphism(phi, x, random_hermitian(alg, rng, 1.0));
}

TEST_CASE("ampliation refuses to blow up an infinite tail") {
    CHECK_THROWS_AS(Morphism::ampliation(standard_infinite_algebra(), 2), BadMorphism);
    // factor one is always fine and acts as the identity
    const auto phi = Morphism::ampliation(standard_infinite_algebra(), 1);
    Rng rng(65);
    const auto x = random_hermitian(standard_infinite_algebra(), rng, 1.0);
    CHECK(extend_morphism(phi, x).identical_to(x));
}

TEST_CASE("operators must live over the morphism source") {
    const auto phi = Morphism::identity(standard_finite_algebra());
    const auto x = BlockOperator::identity(standard_infinite_algebra());
    CHECK_THROWS_AS((void)extend_morphism(phi, x), BadMorphism);
}
