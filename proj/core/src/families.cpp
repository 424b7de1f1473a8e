#include "mvnlab/families.hpp"

#include <cmath>
#include <numbers>
#include <utility>

#include "mvnlab/errors.hpp"
#include "mvnlab/linops.hpp"

namespace mvnlab {

namespace {

constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;

} // namespace

std::uint64_t Rng::next() noexcept {
    state_ += kGamma;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

double Rng::uniform() noexcept {
    // 53 high bits -> double in [0, 1).
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) noexcept {
    return lo + (hi - lo) * uniform();
}

double Rng::normal() noexcept {
    double u = uniform();
    double v = uniform();
    if (u <= 0.0) u = 0x1.0p-53;
    return std::sqrt(-2.0 * std::log(u)) * std::cos(2.0 * std::numbers::pi * v);
}

Complex Rng::complex_normal() noexcept {
    double re = normal();
    double im = normal();
    return Complex(re, im) / std::sqrt(2.0);
}

Rng Rng::child(std::uint64_t stream) const noexcept {
    return Rng(seed_ + kGamma * (stream + 1));
}

namespace {

using linops::CMatrix;

CMatrix random_square(Rng& rng, int dim) {
    CMatrix m(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j)
            m(i, j) = rng.complex_normal();
    return m;
}

enum class Symmetry { Hermitian, Skew };

// Random blockwise operator with the requested symmetry, rescaled so the
// largest prefix block has op-norm exactly `scale`.  Over infinite algebras
// the tail is a matching random constant (real for Hermitian, imaginary for
// skew) of magnitude at most scale/2.
BlockOperator random_symmetric_operator(const AlgebraPtr& alg, Rng& rng, double scale,
                                        Symmetry sym) {
    const auto p = static_cast<std::int64_t>(alg->prefix_blocks());
    std::vector<CMatrix> blocks;
    blocks.reserve(static_cast<std::size_t>(p));
    double worst = 0.0;
    for (std::int64_t k = 0; k < p; ++k) {
        CMatrix g = random_square(rng, alg->block_dim(k));
        CMatrix b = (sym == Symmetry::Hermitian) ? CMatrix((g + g.adjoint()) / 2.0)
                                                 : CMatrix((g - g.adjoint()) / 2.0);
        worst = std::max(worst, linops::op_norm(b));
        blocks.push_back(std::move(b));
    }
    const double factor = (worst > 1e-12) ? scale / worst : 0.0;
    for (auto& b : blocks) b *= factor;

    TailFormula tail = TailFormula::zero();
    if (alg->has_tail()) {
        const double c = rng.uniform(-0.5 * scale, 0.5 * scale);
        tail = TailFormula::constant(sym == Symmetry::Hermitian ? Complex(c, 0.0)
                                                                : Complex(0.0, c));
    }
    return BlockOperator::from_blocks(alg, std::move(blocks), tail);
}

} // namespace

BlockOperator random_hermitian(const AlgebraPtr& alg, Rng& rng, double scale) {
    return random_symmetric_operator(alg, rng, scale, Symmetry::Hermitian);
}

BlockOperator random_skew(const AlgebraPtr& alg, Rng& rng, double scale) {
    return random_symmetric_operator(alg, rng, scale, Symmetry::Skew);
}

BlockOperator random_prefix_operator(const AlgebraPtr& alg, Rng& rng) {
    const auto p = static_cast<std::int64_t>(alg->prefix_blocks());
    std::vector<CMatrix> blocks;
    blocks.reserve(static_cast<std::size_t>(p));
    for (std::int64_t k = 0; k < p; ++k) blocks.push_back(random_square(rng, alg->block_dim(k)));
    return BlockOperator::from_blocks(alg, std::move(blocks));
}

AlgebraPtr standard_infinite_algebra() {
    return FiniteBlockAlgebra::make_with_tail({2, 3, 1, 2}, {0.3, 0.2, 0.1, 0.15}, 0.5);
}

AlgebraPtr standard_finite_algebra() {
    return FiniteBlockAlgebra::make({2, 3, 4}, {0.25, 0.35, 0.4});
}

AlgebraPtr diagonal_algebra() {
    return FiniteBlockAlgebra::make_with_tail({1}, {0.5}, 0.5);
}

namespace {

double pow2(std::int64_t n) { return std::ldexp(1.0, static_cast<int>(-n)); }

// Blockwise conjugation U X U* where U = exp(t S) with S skew;
// both operands must be tail-free.
BlockOperator rotate_by(const BlockOperator& x, const BlockOperator& s, double t) {
    std::vector<CMatrix> blocks;
    const std::int64_t p = x.prefix_count();
    blocks.reserve(static_cast<std::size_t>(p));
    for (std::int64_t k = 0; k < p; ++k) {
        const CMatrix u = linops::matrix_exp(CMatrix(t * s.block(k)));
        blocks.emplace_back(u * x.block(k) * u.adjoint());
    }
    return BlockOperator::from_blocks(x.algebra(), std::move(blocks));
}

// Random blockwise orthogonal projection of roughly half rank.
BlockOperator random_projection(const AlgebraPtr& alg, Rng& rng) {
    const auto p = static_cast<std::int64_t>(alg->prefix_blocks());
    std::vector<CMatrix> blocks;
    blocks.reserve(static_cast<std::size_t>(p));
    for (std::int64_t k = 0; k < p; ++k) {
        const int d = alg->block_dim(k);
        CMatrix g = random_square(rng, d);
        const CMatrix h = (g + g.adjoint()) / 2.0;
        const auto dec = linops::hermitian_eig(h);
        const int rank = std::max(1, d / 2);
        CMatrix proj = CMatrix::Zero(d, d);
        for (int j = 0; j < rank; ++j)
            proj += dec.basis.col(j) * dec.basis.col(j).adjoint();
        blocks.push_back(std::move(proj));
    }
    return BlockOperator::from_blocks(alg, std::move(blocks));
}

Family spike_family(std::uint64_t) {
    auto alg = diagonal_algebra();
    return Family{
        .name = "spike",
        .summary = "n * (unit of block n) on the diagonal algebra; strongly null "
                   "but with exploding operator norms",
        .expected_converge = true,
        .bounded = false,
        .self_adjoint = true,
        .algebra = alg,
        .limit = BlockOperator::zero(alg),
        .member = [alg](std::int64_t n) {
            return Complex(static_cast<double>(n), 0.0) * BlockOperator::block_unit(alg, n);
        },
    };
}

Family prefix_perturbation_family(std::uint64_t seed) {
    auto alg = standard_infinite_algebra();
    Rng rng(seed);
    Rng r0 = rng.child(0), r1 = rng.child(1);
    BlockOperator base = random_hermitian(alg, r0, 0.9);
    BlockOperator dir = random_hermitian(alg, r1, 0.9);
    return Family{
        .name = "prefix-perturbation",
        .summary = "fixed Hermitian base plus 2^-n times a fixed Hermitian direction",
        .expected_converge = true,
        .bounded = true,
        .self_adjoint = true,
        .algebra = alg,
        .limit = base,
        .member = [base, dir](std::int64_t n) { return base + Complex(pow2(n), 0.0) * dir; },
    };
}

Family tail_coefficient_decay_family(std::uint64_t) {
    auto alg = standard_infinite_algebra();
    return Family{
        .name = "tail-coefficient-decay",
        .summary = "2^-n * k on the tail: every member unbounded, the limit zero",
        .expected_converge = true,
        .bounded = false,
        .self_adjoint = true,
        .algebra = alg,
        .limit = BlockOperator::zero(alg),
        .member = [alg](std::int64_t n) {
            return BlockOperator::from_scalar_formula(
                alg, TailFormula::monomial(Complex(pow2(n), 0.0), 1));
        },
    };
}

Family rotation_drift_family(std::uint64_t seed) {
    auto alg = standard_finite_algebra();
    Rng rng(seed);
    Rng r0 = rng.child(0), r1 = rng.child(1);
    BlockOperator d = random_hermitian(alg, r0, 0.9);
    BlockOperator s = random_skew(alg, r1, 0.9);
    return Family{
        .name = "rotation-drift",
        .summary = "unitary conjugates exp(2^-n S) D exp(-2^-n S) drifting back to D",
        .expected_converge = true,
        .bounded = true,
        .self_adjoint = true,
        .algebra = alg,
        .limit = d,
        .member = [d, s](std::int64_t n) { return rotate_by(d, s, pow2(n)); },
    };
}

Family projection_mix_family(std::uint64_t seed) {
    auto alg = standard_finite_algebra();
    Rng rng(seed);
    Rng r0 = rng.child(0), r1 = rng.child(1);
    BlockOperator p = random_projection(alg, r0);
    BlockOperator q = random_projection(alg, r1);
    return Family{
        .name = "projection-mix",
        .summary = "convex mix (1-4^-n) p + 4^-n q of two projections settling on p",
        .expected_converge = true,
        .bounded = true,
        .self_adjoint = true,
        .algebra = alg,
        .limit = p,
        .member = [p, q](std::int64_t n) {
            const double eps = pow2(2 * n);
            return Complex(1.0 - eps, 0.0) * p + Complex(eps, 0.0) * q;
        },
    };
}

Family tail_exp_decay_family(std::uint64_t seed) {
    auto alg = standard_infinite_algebra();
    Rng rng(seed);
    Rng r0 = rng.child(0);
    BlockOperator base = random_hermitian(alg, r0, 0.8);
    auto bump = [alg](double c) {
        return BlockOperator::from_scalar_formula(
            alg, TailFormula::monomial(Complex(c, 0.0), 0, Complex(-1.0, 0.0)));
    };
    return Family{
        .name = "tail-exp-decay",
        .summary = "Hermitian base plus (1 + 2^-n)/2 times an e^-k correction",
        .expected_converge = true,
        .bounded = true,
        .self_adjoint = true,
        .algebra = alg,
        .limit = base + bump(0.5),
        .member = [base, bump](std::int64_t n) { return base + bump(0.5 * (1.0 + pow2(n))); },
    };
}

Family multiblock_perturbation_family(std::uint64_t seed) {
    auto alg = standard_finite_algebra();
    Rng rng(seed);
    Rng r0 = rng.child(0);
    BlockOperator base = random_hermitian(alg, r0, 0.9);
    return Family{
        .name = "multiblock-perturbation",
        .summary = "Hermitian base plus 2^-n times a fresh random Hermitian per index",
        .expected_converge = true,
        .bounded = true,
        .self_adjoint = true,
        .algebra = alg,
        .limit = base,
        .member = [base, alg, rng](std::int64_t n) {
            Rng rn = rng.child(100 + static_cast<std::uint64_t>(n));
            return base + Complex(pow2(n), 0.0) * random_hermitian(alg, rn, 0.9);
        },
    };
}

Family commutator_shrink_family(std::uint64_t seed) {
    auto alg = standard_finite_algebra();
    Rng rng(seed);
    Rng r0 = rng.child(0), r1 = rng.child(1);
    BlockOperator h = random_hermitian(alg, r0, 0.6);
    BlockOperator s = random_skew(alg, r1, 0.6);
    BlockOperator c = s * h - h * s;  // [skew, hermitian] is hermitian
    return Family{
        .name = "commutator-shrink",
        .summary = "H + 2^-n [S, H]: Hermitian commutator corrections vanishing in norm",
        .expected_converge = true,
        .bounded = true,
        .self_adjoint = true,
        .algebra = alg,
        .limit = h,
        .member = [h, c](std::int64_t n) { return h + Complex(pow2(n), 0.0) * c; },
    };
}

Family unbounded_tail_scale_family(std::uint64_t) {
    auto alg = standard_infinite_algebra();
    auto ramp = [alg](double c) {
        return BlockOperator::from_scalar_formula(alg,
                                                  TailFormula::monomial(Complex(c, 0.0), 1));
    };
    return Family{
        .name = "unbounded-tail-scale",
        .summary = "(1 + 2^-n) k on the tail: converges to the unbounded operator k",
        .expected_converge = true,
        .bounded = false,
        .self_adjoint = true,
        .algebra = alg,
        .limit = ramp(1.0),
        .member = [ramp](std::int64_t n) { return ramp(1.0 + pow2(n)); },
    };
}

Family diagonal_phase_family(std::uint64_t) {
    auto alg = diagonal_algebra();
    return Family{
        .name = "diagonal-phase",
        .summary = "(exp(i 2^-n) - 1) times the identity: non-self-adjoint null sequence",
        .expected_converge = true,
        .bounded = true,
        .self_adjoint = false,
        .algebra = alg,
        .limit = BlockOperator::zero(alg),
        .member = [alg](std::int64_t n) {
            const Complex c = std::exp(Complex(0.0, pow2(n))) - Complex(1.0, 0.0);
            return BlockOperator::from_scalar_formula(alg, TailFormula::constant(c));
        },
    };
}

Family alternating_sign_family(std::uint64_t seed) {
    auto alg = standard_finite_algebra();
    Rng rng(seed);
    Rng r0 = rng.child(0);
    // Spectrum inside +/-[0.14, 0.86]: safely visible to every block vector.
    BlockOperator x = Complex(0.5, 0.0) * BlockOperator::identity(alg) +
                      Complex(0.4, 0.0) * random_hermitian(alg, r0, 0.9);
    return Family{
        .name = "alternating-sign",
        .summary = "(-1)^n times a fixed positive-spectrum Hermitian; oscillates forever",
        .expected_converge = false,
        .bounded = true,
        .self_adjoint = true,
        .algebra = alg,
        .limit = BlockOperator::zero(alg),
        .member = [x](std::int64_t n) { return (n % 2 == 0) ? x : -x; },
    };
}

Family constant_offset_family(std::uint64_t seed) {
    auto alg = standard_infinite_algebra();
    Rng rng(seed);
    Rng r0 = rng.child(0);
    BlockOperator base = random_hermitian(alg, r0, 0.9);
    BlockOperator shifted = base + Complex(0.5, 0.0) * BlockOperator::identity(alg);
    return Family{
        .name = "constant-offset",
        .summary = "base + identity/2 measured against the base: constant positive gap",
        .expected_converge = false,
        .bounded = true,
        .self_adjoint = true,
        .algebra = alg,
        .limit = base,
        .member = [shifted](std::int64_t) { return shifted; },
    };
}

Family phase_cycle_family(std::uint64_t) {
    auto alg = diagonal_algebra();
    return Family{
        .name = "phase-cycle",
        .summary = "0.8 exp(2 pi i n / 3) on block 0: cycles through three phases",
        .expected_converge = false,
        .bounded = true,
        .self_adjoint = false,
        .algebra = alg,
        .limit = BlockOperator::zero(alg),
        .member = [alg](std::int64_t n) {
            const double angle = 2.0 * std::numbers::pi * static_cast<double>(n % 3) / 3.0;
            return Complex(0.8, 0.0) * std::exp(Complex(0.0, angle)) *
                   BlockOperator::block_unit(alg, 0);
        },
    };
}

Family growing_spike_family(std::uint64_t) {
    auto alg = diagonal_algebra();
    return Family{
        .name = "growing-spike",
        .summary = "(n+1) on block 0: unbounded growth pinned to one block",
        .expected_converge = false,
        .bounded = false,
        .self_adjoint = true,
        .algebra = alg,
        .limit = BlockOperator::zero(alg),
        .member = [alg](std::int64_t n) {
            return Complex(static_cast<double>(n + 1), 0.0) * BlockOperator::block_unit(alg, 0);
        },
    };
}

Family oscillating_tail_family(std::uint64_t) {
    auto alg = standard_infinite_algebra();
    return Family{
        .name = "oscillating-tail",
        .summary = "0.3 (-1)^n (-1)^k across all blocks: sign flips in n and k",
        .expected_converge = false,
        .bounded = true,
        .self_adjoint = true,
        .algebra = alg,
        .limit = BlockOperator::zero(alg),
        .member = [alg](std::int64_t n) {
            const double sign = (n % 2 == 0) ? 1.0 : -1.0;
            // (-1)^k realized as exp(i pi k)
            return BlockOperator::from_scalar_formula(
                alg, TailFormula::monomial(Complex(0.3 * sign, 0.0), 0,
                                           Complex(0.0, std::numbers::pi)));
        },
    };
}

} // namespace

const std::vector<std::string>& family_names() {
    static const std::vector<std::string> names = {
        "spike",
        "prefix-perturbation",
        "tail-coefficient-decay",
        "rotation-drift",
        "projection-mix",
        "tail-exp-decay",
        "multiblock-perturbation",
        "commutator-shrink",
        "unbounded-tail-scale",
        "diagonal-phase",
        "alternating-sign",
        "constant-offset",
        "phase-cycle",
        "growing-spike",
        "oscillating-tail",
    };
    return names;
}

Family make_family(const std::string& name, std::uint64_t seed) {
    if (name == "spike") return spike_family(seed);
    if (name == "prefix-perturbation") return prefix_perturbation_family(seed);
    if (name == "tail-coefficient-decay") return tail_coefficient_decay_family(seed);
    if (name == "rotation-drift") return rotation_drift_family(seed);
    if (name == "projection-mix") return projection_mix_family(seed);
    if (name == "tail-exp-decay") return tail_exp_decay_family(seed);
    if (name == "multiblock-perturbation") return multiblock_perturbation_family(seed);
    if (name == "commutator-shrink") return commutator_shrink_family(seed);
    if (name == "unbounded-tail-scale") return unbounded_tail_scale_family(seed);
    if (name == "diagonal-phase") return diagonal_phase_family(seed);
    if (name == "alternating-sign") return alternating_sign_family(seed);
    if (name == "constant-offset") return constant_offset_family(seed);
    if (name == "phase-cycle") return phase_cycle_family(seed);
    if (name == "growing-spike") return growing_spike_family(seed);
    if (name == "oscillating-tail") return oscillating_tail_family(seed);
    throw ConfigError("unknown family '" + name + "'");
}

std::vector<Family> all_families(std::uint64_t seed) {
    std::vector<Family> out;
    out.reserve(family_names().size());
    std::uint64_t salt = 0;
    for (const auto& name : family_names()) out.push_back(make_family(name, seed + ++salt));
    return out;
}

} // namespace mvnlab
