#pragma once

#include <cstdint>
#include <vector>

#include "mvnlab/algebra.hpp"
#include "mvnlab/tail_formula.hpp"

// Affiliated operators over a block algebra: an explicit matrix per prefix
// block plus a closed-form scalar tail f(k)·1 on every block past the prefix.
// Sums, products, scalars and adjoints act blockwise (the affiliated closures
// of the unbounded model reduce to exactly this on direct sums), so the
// *-algebra laws hold with no domain bookkeeping; unboundedness only shows up
// through the tail formula's growth.

namespace mvnlab {

class BlockOperator {
public:
    // blocks[k] is the matrix of block k; blocks.size() may exceed the
    // algebra prefix (extra blocks are 1x1 tail materializations).  The tail
    // formula covers every block index >= blocks.size().
    static BlockOperator from_blocks(AlgebraPtr alg, std::vector<linops::CMatrix> blocks,
                                     TailFormula tail = TailFormula::zero());
    // f(k)·1 on every block (prefix blocks get f(k)·I_{n_k}).
    static BlockOperator from_scalar_formula(AlgebraPtr alg, const TailFormula& formula);
    static BlockOperator zero(AlgebraPtr alg);
    static BlockOperator identity(AlgebraPtr alg);
    // Projection onto block k (unit of the k-th summand).
    static BlockOperator block_unit(AlgebraPtr alg, std::int64_t k);

    const AlgebraPtr& algebra() const noexcept { return algebra_; }
    std::int64_t prefix_count() const noexcept { return static_cast<std::int64_t>(blocks_.size()); }
    const std::vector<linops::CMatrix>& prefix() const noexcept { return blocks_; }
    const TailFormula& tail() const noexcept { return tail_; }

    // Materialized block k (tail blocks as f(k)·I).
    linops::CMatrix block(std::int64_t k) const;
    // Scalar value of tail block k; requires k >= prefix_count().
    Complex tail_value(std::int64_t k) const;

    // Rewrites the representation with at least `count` explicit blocks
    // (lets callers resolve GrammarOverflow by materializing).
    BlockOperator materialized(std::int64_t count) const;

    BlockOperator operator-() const;
    friend BlockOperator operator+(const BlockOperator& a, const BlockOperator& b);
    friend BlockOperator operator-(const BlockOperator& a, const BlockOperator& b);
    friend BlockOperator operator*(const BlockOperator& a, const BlockOperator& b);
    friend BlockOperator operator*(Complex s, const BlockOperator& a);

    BlockOperator adjoint() const;
    BlockOperator re_part() const;
    BlockOperator im_part() const;

    bool is_hermitian(double tol = linops::kHermitianTol) const;

    // Structural equality of representations (exact prefix + tail match).
    bool identical_to(const BlockOperator& other) const;
    // max_k ||block_k|| <= tol, blockwise (prefix norms and certified tail sup).
    bool approx_zero(double tol) const;

private:
    BlockOperator(AlgebraPtr alg, std::vector<linops::CMatrix> blocks, TailFormula tail)
        : algebra_(std::move(alg)), blocks_(std::move(blocks)), tail_(std::move(tail)) {}

    AlgebraPtr algebra_;
    std::vector<linops::CMatrix> blocks_;
    TailFormula tail_;
};

// Normalized trace tau(x) = sum_k w_k tr(x_k)/n_k with the tail summed in
// closed form.  Requires x bounded; throws Unbounded / DivergentTail.
Complex tau(const BlockOperator& x);

// sup_k ||x_k||: exact over the prefix, certified (exact for single-term
// tails) over the tail; +infinity when the tail grows.
double sup_norm(const BlockOperator& x);
bool bounded_part_membership(const BlockOperator& x);

// Applies x blockwise to a finitely supported vector.
BlockVector apply(const BlockOperator& x, const BlockVector& v);

// theta-weighted direct sum: concatenates the block lists with weights
// theta·w and (1-theta)·v.  The left algebra must be tail-free
// (TailConflict otherwise: nothing can follow an infinite tail).
struct DirectSum {
    AlgebraPtr algebra;
    BlockOperator op;
};
DirectSum direct_sum(const BlockOperator& a, const BlockOperator& b, double theta);
AlgebraPtr direct_sum_algebra(const AlgebraPtr& a, const AlgebraPtr& b, double theta);

} // namespace mvnlab
