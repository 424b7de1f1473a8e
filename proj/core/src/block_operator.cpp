#include "mvnlab/block_operator.hpp"

#include <cmath>

namespace mvnlab {

using linops::CMatrix;
using linops::CVector;

namespace {

void check_block_shape(const FiniteBlockAlgebra& alg, std::int64_t k, const CMatrix& m) {
    const int dim = alg.block_dim(k);
    if (m.rows() != dim || m.cols() != dim)
        throw DimensionMismatch("block operator: block " + std::to_string(k) + " must be " +
                                std::to_string(dim) + "x" + std::to_string(dim) + ", got " +
                                std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
    if (!m.allFinite())
        throw DimensionMismatch("block operator: block " + std::to_string(k) +
                                " has non-finite entries");
}

void require_same_algebra(const BlockOperator& a, const BlockOperator& b, const char* who) {
    if (!(*a.algebra() == *b.algebra()))
        throw AlgebraMismatch(std::string(who) + ": operands live over different algebras");
}

} // namespace

BlockOperator BlockOperator::from_blocks(AlgebraPtr alg, std::vector<CMatrix> blocks,
                                         TailFormula tail) {
    if (!alg) throw AlgebraMismatch("block operator: null algebra");
    const auto p = static_cast<std::int64_t>(alg->prefix_blocks());
    const auto count = alg->block_count();
    if (count && static_cast<std::int64_t>(blocks.size()) > *count)
        throw DimensionMismatch("block operator: more explicit blocks than the algebra has");
    for (std::int64_t k = 0; k < static_cast<std::int64_t>(blocks.size()); ++k)
        check_block_shape(*alg, k, blocks[static_cast<std::size_t>(k)]);

    // Materialize the tail over any uncovered shaped-prefix blocks (and, for
    // tail-free algebras, over everything) so stored tails always describe
    // 1x1 blocks only.
    const std::int64_t target = count ? *count : std::max<std::int64_t>(p, blocks.size());
    for (std::int64_t k = static_cast<std::int64_t>(blocks.size()); k < target; ++k) {
        const int dim = alg->block_dim(k);
        blocks.push_back(tail.value(k) * CMatrix::Identity(dim, dim));
    }
    if (count) tail = TailFormula::zero();
    return BlockOperator(std::move(alg), std::move(blocks), std::move(tail));
}

BlockOperator BlockOperator::from_scalar_formula(AlgebraPtr alg, const TailFormula& formula) {
    return from_blocks(std::move(alg), {}, formula);
}

BlockOperator BlockOperator::zero(AlgebraPtr alg) {
    return from_blocks(std::move(alg), {}, TailFormula::zero());
}

BlockOperator BlockOperator::identity(AlgebraPtr alg) {
    return from_scalar_formula(std::move(alg), TailFormula::constant(Complex(1, 0)));
}

BlockOperator BlockOperator::block_unit(AlgebraPtr alg, std::int64_t k) {
    if (!alg) throw AlgebraMismatch("block_unit: null algebra");
    std::vector<CMatrix> blocks;
    blocks.reserve(static_cast<std::size_t>(k + 1));
    for (std::int64_t j = 0; j <= k; ++j) {
        const int dim = alg->block_dim(j);
        blocks.push_back(j == k ? CMatrix::Identity(dim, dim).eval()
                                : CMatrix::Zero(dim, dim).eval());
    }
    return from_blocks(std::move(alg), std::move(blocks), TailFormula::zero());
}

CMatrix BlockOperator::block(std::int64_t k) const {
    if (k < 0) throw DimensionMismatch("block operator: negative block index");
    if (k < prefix_count()) return blocks_[static_cast<std::size_t>(k)];
    const int dim = algebra_->block_dim(k);  // validates range for finite algebras
    return tail_.value(k) * CMatrix::Identity(dim, dim);
}

Complex BlockOperator::tail_value(std::int64_t k) const {
    if (k < prefix_count())
        throw DimensionMismatch("tail_value: index inside the explicit prefix");
    algebra_->block_dim(k);
    return tail_.value(k);
}

BlockOperator BlockOperator::materialized(std::int64_t count) const {
    if (count <= prefix_count()) return *this;
    std::vector<CMatrix> blocks = blocks_;
    for (std::int64_t k = prefix_count(); k < count; ++k) {
        const int dim = algebra_->block_dim(k);
        blocks.push_back(tail_.value(k) * CMatrix::Identity(dim, dim));
    }
    return BlockOperator(algebra_, std::move(blocks), tail_);
}

BlockOperator BlockOperator::operator-() const { return Complex(-1, 0) * *this; }

BlockOperator operator+(const BlockOperator& a, const BlockOperator& b) {
    require_same_algebra(a, b, "operator+");
    const std::int64_t k_max = std::max(a.prefix_count(), b.prefix_count());
    std::vector<CMatrix> blocks;
    blocks.reserve(static_cast<std::size_t>(k_max));
    for (std::int64_t k = 0; k < k_max; ++k) blocks.push_back(a.block(k) + b.block(k));
    return BlockOperator(a.algebra_, std::move(blocks), a.tail_ + b.tail_);
}

BlockOperator operator-(const BlockOperator& a, const BlockOperator& b) {
    return a + (-b);
}

BlockOperator operator*(const BlockOperator& a, const BlockOperator& b) {
    require_same_algebra(a, b, "operator*");
    const std::int64_t k_max = std::max(a.prefix_count(), b.prefix_count());
    std::vector<CMatrix> blocks;
    blocks.reserve(static_cast<std::size_t>(k_max));
    for (std::int64_t k = 0; k < k_max; ++k) blocks.push_back(a.block(k) * b.block(k));
    return BlockOperator(a.algebra_, std::move(blocks), a.tail_ * b.tail_);
}

BlockOperator operator*(Complex s, const BlockOperator& a) {
    std::vector<CMatrix> blocks;
    blocks.reserve(a.blocks_.size());
    for (const auto& m : a.blocks_) blocks.push_back(s * m);
    return BlockOperator(a.algebra_, std::move(blocks), s * a.tail_);
}

BlockOperator BlockOperator::adjoint() const {
    std::vector<CMatrix> blocks;
    blocks.reserve(blocks_.size());
    for (const auto& m : blocks_) blocks.push_back(m.adjoint());
    return BlockOperator(algebra_, std::move(blocks), tail_.conjugated());
}

BlockOperator BlockOperator::re_part() const {
    return Complex(0.5, 0) * (*this + adjoint());
}

BlockOperator BlockOperator::im_part() const {
    return Complex(0, -0.5) * (*this - adjoint());
}

bool BlockOperator::is_hermitian(double tol) const {
    for (const auto& m : blocks_)
        if (!linops::is_hermitian(m, tol)) return false;
    return (tail_ - tail_.conjugated()).is_zero();
}

bool BlockOperator::identical_to(const BlockOperator& other) const {
    if (!(*algebra_ == *other.algebra_)) return false;
    const std::int64_t k_max = std::max(prefix_count(), other.prefix_count());
    for (std::int64_t k = 0; k < k_max; ++k)
        if (block(k) != other.block(k)) return false;
    return tail_.equals(other.tail_);
}

bool BlockOperator::approx_zero(double tol) const {
    for (const auto& m : blocks_)
        if (linops::op_norm(m) > tol) return false;
    if (tail_.is_zero()) return true;
    const auto profile = tail_.abs_profile(prefix_count());
    return profile.bounded && profile.sup_upper <= tol;
}

// ---------------------------------------------------------------------------

namespace {

// sum_{k >= start} w_k f(k) in closed form for a geometric weight tail.
Complex tail_weighted_sum(const FiniteBlockAlgebra& alg, const TailFormula& f,
                          std::int64_t start) {
    if (f.is_zero()) return Complex(0, 0);
    if (f.is_exp_wrapped())
        throw GrammarOverflow(
            "tau: weighted sum of an exponential-wrapped tail has no closed form; materialize more prefix blocks");
    const auto p = static_cast<std::int64_t>(alg.prefix_blocks());
    const double r = alg.tail_ratio();
    const double scale = alg.tail_mass() * (1.0 - r);
    Complex total(0, 0);
    for (const auto& term : f.terms()) {
        // w_k k^d e^{ak} = scale r^{k-p} k^d e^{ak}; substitute j = k - start:
        // sum_j (j+start)^d z^j * r^{start-p} e^{a start}, z = r e^a.
        const Complex z = r * std::exp(term.rate);
        Complex inner(0, 0);
        double binom = 1.0;
        std::vector<double> start_powers(term.power + 1, 1.0);
        for (int m = 1; m <= term.power; ++m)
            start_powers[m] = start_powers[m - 1] * static_cast<double>(start);
        for (int m = 0; m <= term.power; ++m) {
            if (m > 0) binom = binom * static_cast<double>(term.power - m + 1) / m;
            inner += binom * start_powers[term.power - m] * geometric_power_sum(z, m, 0);
        }
        const Complex front = scale * std::pow(r, static_cast<double>(start - p)) *
                              std::exp(term.rate * static_cast<double>(start));
        total += term.coeff * front * inner;
    }
    return total;
}

} // namespace

Complex tau(const BlockOperator& x) {
    const auto& alg = *x.algebra();
    if (!x.tail().is_zero()) {
        const auto profile = x.tail().abs_profile(x.prefix_count());
        if (!profile.bounded)
            throw Unbounded("tau: operator has an unbounded tail; the trace requires the bounded part");
    }
    Complex total(0, 0);
    for (std::int64_t k = 0; k < x.prefix_count(); ++k) {
        const CMatrix& m = x.prefix()[static_cast<std::size_t>(k)];
        total += alg.weight(k) * m.trace() / static_cast<double>(m.rows());
    }
    if (alg.has_tail() && !x.tail().is_zero())
        total += tail_weighted_sum(alg, x.tail(), x.prefix_count());
    return total;
}

double sup_norm(const BlockOperator& x) {
    double sup = 0.0;
    for (const auto& m : x.prefix()) sup = std::max(sup, linops::op_norm(m));
    if (x.algebra()->has_tail() && !x.tail().is_zero()) {
        const auto profile = x.tail().abs_profile(x.prefix_count());
        if (!profile.bounded) return std::numeric_limits<double>::infinity();
        sup = std::max(sup, profile.sup_upper);
    }
    return sup;
}

bool bounded_part_membership(const BlockOperator& x) { return std::isfinite(sup_norm(x)); }

BlockVector apply(const BlockOperator& x, const BlockVector& v) {
    BlockVector out;
    out.entries.reserve(v.entries.size());
    for (const auto& e : v.entries) {
        const int dim = x.algebra()->block_dim(e.block);
        if (e.coeffs.size() != dim)
            throw DimensionMismatch("apply: vector entry dimension mismatch on block " +
                                    std::to_string(e.block));
        if (e.block < x.prefix_count())
            out.entries.push_back({e.block, x.prefix()[static_cast<std::size_t>(e.block)] * e.coeffs});
        else
            out.entries.push_back({e.block, x.tail().value(e.block) * e.coeffs});
    }
    return out;
}

AlgebraPtr direct_sum_algebra(const AlgebraPtr& a, const AlgebraPtr& b, double theta) {
    if (!(theta > 0.0) || !(theta < 1.0))
        throw BadWeights("direct_sum: theta must lie in (0, 1)");
    if (a->has_tail())
        throw TailConflict("direct_sum: cannot append blocks after an infinite tail");
    std::vector<int> shape = a->shape_prefix();
    shape.insert(shape.end(), b->shape_prefix().begin(), b->shape_prefix().end());
    std::vector<double> weights;
    weights.reserve(shape.size());
    for (double w : a->weight_prefix()) weights.push_back(theta * w);
    for (double w : b->weight_prefix()) weights.push_back((1.0 - theta) * w);
    if (b->has_tail())
        return FiniteBlockAlgebra::make_with_tail(std::move(shape), std::move(weights),
                                                  b->tail_ratio());
    return FiniteBlockAlgebra::make(std::move(shape), std::move(weights));
}

DirectSum direct_sum(const BlockOperator& a, const BlockOperator& b, double theta) {
    AlgebraPtr alg = direct_sum_algebra(a.algebra(), b.algebra(), theta);
    const auto offset = static_cast<std::int64_t>(a.algebra()->prefix_blocks());
    std::vector<CMatrix> blocks = a.prefix();
    blocks.insert(blocks.end(), b.prefix().begin(), b.prefix().end());
    BlockOperator op = BlockOperator::from_blocks(alg, std::move(blocks), b.tail().shifted(offset));
    return DirectSum{std::move(alg), std::move(op)};
}

} // namespace mvnlab
