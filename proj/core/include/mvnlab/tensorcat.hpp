#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mvnlab/block_operator.hpp"
#include "mvnlab/morphisms.hpp"

// Tensor products of tail-free block algebras and affiliated operators, the
// mutually inverse functors between algebras and their affiliated-operator
// rings, and machine checks for the tensor-category coherence axioms.  The
// associativity and unit constraints are represented structurally, as integer
// coordinate relabelings per block, so the pentagon and triangle identities
// are decided by exact permutation arithmetic, never by floating point.

namespace mvnlab {

// Lexicographic (i, j) block order, dims n_i * m_j, weights w_i * v_j.
// Both factors must be tail-free (TailConflict otherwise).
AlgebraPtr tensor_algebra(const AlgebraPtr& m, const AlgebraPtr& n);

// Blockwise Kronecker products in the same lexicographic order.
BlockOperator tensor_op(const BlockOperator& a, const BlockOperator& b);

// The tensor unit: one 1x1 block of weight 1.
AlgebraPtr unit_algebra();

// An affiliated-operator ring, carried by the algebra it is affiliated to;
// its operators are exactly the BlockOperators over that algebra and its
// bounded part recovers the algebra.
struct RingDescriptor {
    AlgebraPtr algebra;
    bool operator==(const RingDescriptor& other) const { return *algebra == *other.algebra; }
};

// A ring morphism is the blockwise extension of an algebra morphism; the
// descriptor data is shared, which is what makes the round trips identities.
struct RingMorphism {
    Morphism descriptor;
    RingDescriptor source;
    RingDescriptor target;
};

RingDescriptor functor_E(const AlgebraPtr& alg);
AlgebraPtr functor_F(const RingDescriptor& ring);
RingMorphism functor_E(const Morphism& phi);
Morphism functor_F(const RingMorphism& phi);

// Applies the extension of the underlying descriptor (defined on all
// affiliated operators, bounded or not).
BlockOperator apply_ring_morphism(const RingMorphism& phi, const BlockOperator& x);

// Exact structural equality of morphism data.
bool morphism_equal(const Morphism& a, const Morphism& b);

// Composition within the descriptor kinds: defined when either side is the
// identity or both sides share a kind (permutations compose, conjugating
// unitaries multiply, ampliation factors multiply); BadMorphism otherwise.
Morphism compose(const Morphism& outer, const Morphism& inner);

using BlockShape = std::vector<std::int64_t>; // block dimensions in order

BlockShape shape_of(const AlgebraPtr& alg);
BlockShape tensor_shape(const BlockShape& a, const BlockShape& b);

// A coordinate relabeling per block: per_block[b][target] = source coordinate.
struct CoordinatePermutation {
    std::vector<std::vector<std::int64_t>> per_block;

    static CoordinatePermutation identity_for(const BlockShape& shape);
    // Apply this first, then `next`; both must live on the same shape.
    CoordinatePermutation then(const CoordinatePermutation& next) const;
    // The action on matrix-unit coordinates (i, j) -> (p(i), p(j)).
    CoordinatePermutation induced_on_matrix_units() const;
    bool is_identity() const;
    std::int64_t coordinate_count() const;
    bool operator==(const CoordinatePermutation& other) const { return per_block == other.per_block; }
};

// (a (x) b) (x) c -> a (x) (b (x) c), as a relabeling of the flat coordinates.
CoordinatePermutation associator_perm(const BlockShape& a, const BlockShape& b,
                                      const BlockShape& c);
CoordinatePermutation left_unitor_perm(const BlockShape& a);  // unit (x) a -> a
CoordinatePermutation right_unitor_perm(const BlockShape& a); // a (x) unit -> a
CoordinatePermutation perm_tensor_id(const CoordinatePermutation& p, const BlockShape& right);
CoordinatePermutation id_tensor_perm(const BlockShape& left, const CoordinatePermutation& p);

struct PentagonCheck {
    bool coordinates_equal = false;  // composite routes agree on coordinates
    bool matrix_units_equal = false; // and on matrix-unit coordinates
    std::int64_t coordinate_count = 0;
    std::int64_t matrix_unit_count = 0;
    bool exact() const { return coordinates_equal && matrix_units_equal; }
};
// The two composite reindexings ((a(x)b)(x)c)(x)d -> a(x)(b(x)(c(x)d)).
PentagonCheck pentagon_check(const BlockShape& a, const BlockShape& b, const BlockShape& c,
                             const BlockShape& d);

struct TriangleCheck {
    bool equal = false;
    std::int64_t coordinate_count = 0;
};
// rho_a (x) id_b versus (id_a (x) lambda_b) after the associator, on
// (a (x) unit) (x) b.
TriangleCheck triangle_check(const BlockShape& a, const BlockShape& b);

struct CoherenceReport {
    PentagonCheck pentagon;
    TriangleCheck triangle_left;  // (m, unit, n)
    TriangleCheck triangle_right; // (n, unit, p)
    double naturality_residual = 0.0; // associator naturality on random operators
    bool exact() const { return pentagon.exact() && triangle_left.equal && triangle_right.equal; }
};
// Pentagon over the quadruple (m, n, p, m); triangles against the unit;
// naturality sampled on seeded random operators.
CoherenceReport coherence_check(const AlgebraPtr& m, const AlgebraPtr& n, const AlgebraPtr& p,
                                std::uint64_t seed = 0xc0ffee);

// Tensor *-algebra laws on concrete operators (blockwise Frobenius defects).
struct TensorLawReport {
    double product = 0.0;     // (a(x)b)(c(x)d) vs (ac)(x)(bd)
    double involution = 0.0;  // (a(x)b)* vs a*(x)b*
    double bilinearity = 0.0; // (a+c)(x)b vs a(x)b + c(x)b, both sides
    double scalar = 0.0;      // (alpha a)(x)b vs alpha (a(x)b)
    double worst() const;
};
TensorLawReport tensor_law_check(const BlockOperator& a, const BlockOperator& b,
                                 const BlockOperator& c, const BlockOperator& d, Complex alpha);

// The center is spanned by the block units; a factor has exactly one block.
struct CenterDescription {
    std::optional<std::int64_t> dimension; // block count; empty when infinite
    bool trivial = false;
    std::vector<BlockOperator> prefix_units;
};
CenterDescription center(const AlgebraPtr& alg);
bool is_factor(const AlgebraPtr& alg);

} // namespace mvnlab
