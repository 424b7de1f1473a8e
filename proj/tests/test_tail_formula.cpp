#include "doctest.h"

#include <cmath>
#include <complex>
#include <vector>

#include "mvnlab/families.hpp"
#include "mvnlab/tail_formula.hpp"

using namespace mvnlab;

namespace {

const double kPi = std::acos(-1.0);

TailFormula random_term_sum(Rng& rng) {
    std::vector<TailTerm> terms;
    const int n = 1 + static_cast<int>(rng.next() % 3);
    for (int j = 0; j < n; ++j) {
        TailTerm t;
        t.coeff = rng.complex_normal();
        t.power = static_cast<int>(rng.next() % 4);
        t.rate = Complex(rng.uniform(-1.0, 0.2), rng.uniform(0.0, 6.0));
        terms.push_back(t);
    }
    return TailFormula::sum_of(terms);
}

void check_close(Complex got, Complex want, double tol = 1e-10) {
    CHECK(std::abs(got - want) <= tol * (1.0 + std::abs(got) + std::abs(want)));
}

} // namespace

TEST_CASE("term evaluation") {
    const TailFormula f = TailFormula::monomial(Complex(2, 0), 1, Complex(-0.5, 0));
    check_close(f.value(3), Complex(2.0 * 3.0 * std::exp(-1.5), 0), 1e-14);
    CHECK(TailFormula::zero().is_zero());
    Complex c;
    CHECK(TailFormula::constant(Complex(3, -1)).is_constant(&c));
    CHECK(c == Complex(3, -1));
}

TEST_CASE("arithmetic agrees with pointwise evaluation") {
    Rng rng(21);
    for (int trial = 0; trial < 25; ++trial) {
        const TailFormula f = random_term_sum(rng);
        const TailFormula g = random_term_sum(rng);
        const TailFormula sum = f + g;
        const TailFormula diff = f - g;
        const TailFormula prod = f * g;
        const TailFormula scaled = Complex(0.5, -2) * f;
        const TailFormula conj = f.conjugated();
        const TailFormula shifted = f.shifted(3);
        for (std::int64_t k = 0; k <= 20; k += 4) {
            check_close(sum.value(k), f.value(k) + g.value(k));
            check_close(diff.value(k), f.value(k) - g.value(k));
            check_close(prod.value(k), f.value(k) * g.value(k));
            check_close(scaled.value(k), Complex(0.5, -2) * f.value(k));
            check_close(conj.value(k), std::conj(f.value(k)));
            if (k >= 3) check_close(shifted.value(k), f.value(k - 3));
        }
    }
}

TEST_CASE("exp of an affine exponent folds to a plain term") {
    const TailFormula arg =
        TailFormula::constant(Complex(0.3, 0)) + TailFormula::monomial(Complex(-0.2, 0.7), 1);
    const TailFormula e = TailFormula::exp_of(arg);
    CHECK_FALSE(e.is_exp_wrapped());
    REQUIRE(e.terms().size() == 1);
    for (std::int64_t k = 0; k <= 12; ++k) check_close(e.value(k), std::exp(arg.value(k)), 1e-13);
}

TEST_CASE("exp of a quadratic exponent stays wrapped and multiplies") {
    const TailFormula quad = TailFormula::monomial(Complex(-0.1, 0), 2);
    const TailFormula e = TailFormula::exp_of(quad);
    CHECK(e.is_exp_wrapped());
    for (std::int64_t k = 0; k <= 10; ++k) check_close(e.value(k), std::exp(quad.value(k)), 1e-13);

    // exp{g} * exp{h} folds into exp{g + h}
    const TailFormula prod = e * e;
    for (std::int64_t k = 0; k <= 10; ++k)
        check_close(prod.value(k), std::exp(2.0 * quad.value(k)), 1e-13);

    // scalar * exp{g} stays in the family
    const TailFormula scaled = Complex(2, 0) * e;
    check_close(scaled.value(4), 2.0 * std::exp(quad.value(4).real()), 1e-13);

    // conjugation flips the exponent
    const TailFormula wrapped_conj = TailFormula::exp_of(TailFormula::monomial(Complex(0, 0.3), 2));
    check_close(wrapped_conj.conjugated().value(5),
                std::conj(wrapped_conj.value(5)), 1e-13);
}

TEST_CASE("combinations outside the family raise GrammarOverflow") {
    const TailFormula wrapped = TailFormula::exp_of(TailFormula::monomial(Complex(1, 0), 2));
    CHECK_THROWS_AS((void)(wrapped + TailFormula::constant(Complex(1, 0))), GrammarOverflow);
    const TailFormula high = TailFormula::monomial(Complex(1, 0), 25);
    CHECK_THROWS_AS((void)(high * high), GrammarOverflow);
}

TEST_CASE("structural predicates") {
    CHECK(TailFormula::monomial(Complex(1, 0), 0, Complex(0, 2.5)).is_unimodular());
    CHECK_FALSE(TailFormula::constant(Complex(0.5, 0)).is_unimodular());
    CHECK_FALSE(TailFormula::monomial(Complex(1, 0), 1).is_unimodular());

    CHECK(TailFormula::constant(Complex(2, 0)).is_real_valued());
    CHECK(TailFormula::monomial(Complex(1.5, 0), 2).is_real_valued());
    // e^{i pi k} = (-1)^k is real at every integer, and detected structurally
    CHECK(TailFormula::monomial(Complex(0.3, 0), 0, Complex(0, kPi)).is_real_valued());
    CHECK_FALSE(TailFormula::constant(Complex(0, 1)).is_real_valued());

    CHECK(TailFormula::monomial(Complex(1, 0), 1).equals(TailFormula::monomial(Complex(1, 0), 1)));
}

TEST_CASE("abs_profile classifies growth") {
    const auto unbounded = TailFormula::monomial(Complex(1, 0), 1).abs_profile(0);
    CHECK_FALSE(unbounded.bounded);

    const auto decaying = TailFormula::monomial(Complex(2, 0), 0, Complex(-0.5, 0)).abs_profile(3);
    CHECK(decaying.bounded);
    CHECK(decaying.decays_to_zero);
    CHECK(decaying.sup_upper == doctest::Approx(2.0 * std::exp(-1.5)).epsilon(1e-12));

    const auto flat = TailFormula::constant(Complex(0, 3)).abs_profile(0);
    CHECK(flat.bounded);
    CHECK_FALSE(flat.decays_to_zero);
    CHECK(flat.sup_upper == doctest::Approx(3.0).epsilon(1e-12));

    const auto nothing = TailFormula::zero().abs_profile(5);
    CHECK(nothing.bounded);
    CHECK(nothing.decays_to_zero);
    CHECK(nothing.sup_upper == doctest::Approx(0.0));
}

TEST_CASE("exceed_split certifies both sides of the threshold") {
    Rng rng(22);
    std::vector<TailFormula> cases = {
        TailFormula::monomial(Complex(1, 0), 0, Complex(std::log(0.5), 0)), // 2^{-k}
        TailFormula::monomial(Complex(1, 0), 1),                            // k
        TailFormula::constant(Complex(0.25, 0)),
        TailFormula::monomial(Complex(3, 0), 2, Complex(-0.4, 1.1)),
    };
    for (const auto& f : cases) {
        for (double thr : {0.1, 0.5, 2.0}) {
            const auto split = f.exceed_split(thr, 0);
            for (std::int64_t k = 0; k <= split.scan_end; ++k) {
                const bool listed =
                    std::find(split.exceeding.begin(), split.exceeding.end(), k) !=
                    split.exceeding.end();
                CHECK(listed == (std::abs(f.value(k)) > thr));
            }
            for (std::int64_t k = split.scan_end + 1; k <= split.scan_end + 40; ++k)
                CHECK(split.rest_all == (std::abs(f.value(k)) > thr));
        }
    }
}

TEST_CASE("exceed_split finds far-out crossings of slowly growing tails") {
    // a tiny coefficient pushes the crossing tens of millions of blocks out;
    // the certificate must still come back (and quickly)
    const auto f = TailFormula::monomial(Complex(std::ldexp(1.0, -25), 0), 1);
    const auto split = f.exceed_split(0.5, 0);
    CHECK(split.rest_all);
    CHECK(split.exceeding.empty());
    CHECK(std::abs(f.value(split.scan_end)) <= 0.5);
    CHECK(std::abs(f.value(split.scan_end + 1)) > 0.5);

    // growing exponential with a tiny coefficient, same story
    const auto g = TailFormula::monomial(Complex(1e-12, 0), 0, Complex(0.001, 0));
    const auto gs = g.exceed_split(1.0, 0);
    CHECK(gs.rest_all);
    CHECK(std::abs(g.value(gs.scan_end)) <= 1.0);
    CHECK(std::abs(g.value(gs.scan_end + 1)) > 1.0);
}

TEST_CASE("geometric_power_sum matches the brute-force series") {
    for (int power : {0, 1, 3}) {
        for (Complex z : {Complex(0.5, 0), Complex(0.3, 0.4), Complex(-0.6, 0.1)}) {
            for (std::int64_t start : {std::int64_t(0), std::int64_t(2), std::int64_t(7)}) {
                Complex brute(0, 0);
                for (std::int64_t k = start; k < start + 400; ++k)
                    brute += std::pow(static_cast<double>(k), power) *
                             std::pow(z, static_cast<double>(k));
                check_close(geometric_power_sum(z, power, start), brute, 1e-11);
            }
        }
    }
}

TEST_CASE("geometric_power_sum rejects non-contracting ratios") {
    CHECK_THROWS_AS(geometric_power_sum(Complex(1, 0), 0, 0), DivergentTail);
    CHECK_THROWS_AS(geometric_power_sum(std::polar(1.0, 0.7), 1, 0), DivergentTail);
    CHECK_THROWS_AS(geometric_power_sum(Complex(1.2, 0), 0, 3), DivergentTail);
}
