#include "mvnlab/tensorcat.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "mvnlab/errors.hpp"

namespace mvnlab {

using linops::CMatrix;

AlgebraPtr tensor_algebra(const AlgebraPtr& m, const AlgebraPtr& n) {
    if (m->has_tail() || n->has_tail())
        throw TailConflict("tensor products need tail-free factors");
    std::vector<int> shape;
    std::vector<double> weights;
    shape.reserve(m->prefix_blocks() * n->prefix_blocks());
    weights.reserve(shape.capacity());
    const auto mp = static_cast<std::int64_t>(m->prefix_blocks());
    const auto np = static_cast<std::int64_t>(n->prefix_blocks());
    for (std::int64_t i = 0; i < mp; ++i) {
        for (std::int64_t j = 0; j < np; ++j) {
            shape.push_back(m->block_dim(i) * n->block_dim(j));
            weights.push_back(m->weight(i) * n->weight(j));
        }
    }
    return FiniteBlockAlgebra::make(shape, weights);
}

BlockOperator tensor_op(const BlockOperator& a, const BlockOperator& b) {
    const AlgebraPtr alg = tensor_algebra(a.algebra(), b.algebra());
    std::vector<CMatrix> blocks;
    blocks.reserve(static_cast<std::size_t>(a.prefix_count() * b.prefix_count()));
    for (std::int64_t i = 0; i < a.prefix_count(); ++i)
        for (std::int64_t j = 0; j < b.prefix_count(); ++j)
            blocks.push_back(linops::kron(a.prefix()[static_cast<std::size_t>(i)],
                                          b.prefix()[static_cast<std::size_t>(j)]));
    return BlockOperator::from_blocks(alg, std::move(blocks), TailFormula::zero());
}

AlgebraPtr unit_algebra() {
    static const AlgebraPtr unit = FiniteBlockAlgebra::make({1}, {1.0});
    return unit;
}

RingDescriptor functor_E(const AlgebraPtr& alg) { return RingDescriptor{alg}; }

AlgebraPtr functor_F(const RingDescriptor& ring) { return ring.algebra; }

RingMorphism functor_E(const Morphism& phi) {
    return RingMorphism{phi, RingDescriptor{phi.source()}, RingDescriptor{phi.target()}};
}

Morphism functor_F(const RingMorphism& phi) { return phi.descriptor; }

BlockOperator apply_ring_morphism(const RingMorphism& phi, const BlockOperator& x) {
    return extend_morphism(phi.descriptor, x);
}

bool morphism_equal(const Morphism& a, const Morphism& b) {
    if (a.kind() != b.kind()) return false;
    if (!(*a.source() == *b.source()) || !(*a.target() == *b.target())) return false;
    switch (a.kind()) {
        case MorphismKind::Identity: return true;
        case MorphismKind::BlockPermutation: return a.permutation() == b.permutation();
        case MorphismKind::UnitaryConjugation: {
            if (a.unitaries().size() != b.unitaries().size()) return false;
            for (std::size_t k = 0; k < a.unitaries().size(); ++k)
                if (a.unitaries()[k] != b.unitaries()[k]) return false;
            return true;
        }
        case MorphismKind::Ampliation: return a.ampliation_factor() == b.ampliation_factor();
    }
    return false;
}

Morphism compose(const Morphism& outer, const Morphism& inner) {
    if (!(*inner.target() == *outer.source()))
        throw BadMorphism("composition needs matching middle algebras");
    if (inner.kind() == MorphismKind::Identity) return outer;
    if (outer.kind() == MorphismKind::Identity) return inner;
    if (outer.kind() != inner.kind())
        throw BadMorphism("composite leaves the descriptor kinds");
    switch (outer.kind()) {
        case MorphismKind::BlockPermutation: {
            // target slot k <- outer.perm[k] in the middle <- inner.perm of that.
            std::vector<std::int64_t> composed(outer.permutation().size());
            for (std::size_t k = 0; k < composed.size(); ++k)
                composed[k] = inner.permutation()[static_cast<std::size_t>(
                    outer.permutation()[k])];
            return Morphism::block_permutation(inner.source(), std::move(composed),
                                               outer.target());
        }
        case MorphismKind::UnitaryConjugation: {
            std::vector<CMatrix> products;
            products.reserve(outer.unitaries().size());
            for (std::size_t k = 0; k < outer.unitaries().size(); ++k)
                products.push_back(outer.unitaries()[k] * inner.unitaries()[k]);
            return Morphism::unitary_conjugation(inner.source(), std::move(products));
        }
        case MorphismKind::Ampliation:
            return Morphism::ampliation(inner.source(),
                                        inner.ampliation_factor() * outer.ampliation_factor());
        case MorphismKind::Identity: break; // handled above
    }
    throw BadMorphism("unknown morphism kind");
}

BlockShape shape_of(const AlgebraPtr& alg) {
    if (alg->has_tail()) throw TailConflict("coherence shapes need tail-free algebras");
    return BlockShape(alg->shape_prefix().begin(), alg->shape_prefix().end());
}

BlockShape tensor_shape(const BlockShape& a, const BlockShape& b) {
    BlockShape out;
    out.reserve(a.size() * b.size());
    for (const std::int64_t da : a)
        for (const std::int64_t db : b) out.push_back(da * db);
    return out;
}

CoordinatePermutation CoordinatePermutation::identity_for(const BlockShape& shape) {
    CoordinatePermutation p;
    p.per_block.reserve(shape.size());
    for (const std::int64_t d : shape) {
        std::vector<std::int64_t> ident(static_cast<std::size_t>(d));
        std::iota(ident.begin(), ident.end(), 0);
        p.per_block.push_back(std::move(ident));
    }
    return p;
}

CoordinatePermutation CoordinatePermutation::then(const CoordinatePermutation& next) const {
    if (per_block.size() != next.per_block.size())
        throw DimensionMismatch("composing permutations over different block lists");
    CoordinatePermutation out;
    out.per_block.reserve(per_block.size());
    for (std::size_t b = 0; b < per_block.size(); ++b) {
        const auto& first = per_block[b];
        const auto& second = next.per_block[b];
        if (first.size() != second.size())
            throw DimensionMismatch("composing permutations over different block sizes");
        std::vector<std::int64_t> composed(second.size());
        for (std::size_t t = 0; t < second.size(); ++t)
            composed[t] = first[static_cast<std::size_t>(second[t])];
        out.per_block.push_back(std::move(composed));
    }
    return out;
}

CoordinatePermutation CoordinatePermutation::induced_on_matrix_units() const {
    CoordinatePermutation out;
    out.per_block.reserve(per_block.size());
    for (const auto& p : per_block) {
        const auto d = static_cast<std::int64_t>(p.size());
        std::vector<std::int64_t> pairs(static_cast<std::size_t>(d * d));
        for (std::int64_t i = 0; i < d; ++i)
            for (std::int64_t j = 0; j < d; ++j)
                pairs[static_cast<std::size_t>(i * d + j)] =
                    p[static_cast<std::size_t>(i)] * d + p[static_cast<std::size_t>(j)];
        out.per_block.push_back(std::move(pairs));
    }
    return out;
}

bool CoordinatePermutation::is_identity() const {
    for (const auto& p : per_block)
        for (std::size_t i = 0; i < p.size(); ++i)
            if (p[i] != static_cast<std::int64_t>(i)) return false;
    return true;
}

std::int64_t CoordinatePermutation::coordinate_count() const {
    std::int64_t total = 0;
    for (const auto& p : per_block) total += static_cast<std::int64_t>(p.size());
    return total;
}

CoordinatePermutation associator_perm(const BlockShape& a, const BlockShape& b,
                                      const BlockShape& c) {
    CoordinatePermutation out;
    out.per_block.reserve(a.size() * b.size() * c.size());
    for (const std::int64_t da : a) {
        for (const std::int64_t db : b) {
            for (const std::int64_t dc : c) {
                std::vector<std::int64_t> p(static_cast<std::size_t>(da * db * dc));
                for (std::int64_t x = 0; x < da; ++x) {
                    for (std::int64_t y = 0; y < db; ++y) {
                        for (std::int64_t z = 0; z < dc; ++z) {
                            // source groups as ((x, y), z), target as (x, (y, z));
                            // both flatten through their own arithmetic.
                            const std::int64_t source = (x * db + y) * dc + z;
                            const std::int64_t target = x * (db * dc) + (y * dc + z);
                            p[static_cast<std::size_t>(target)] = source;
                        }
                    }
                }
                out.per_block.push_back(std::move(p));
            }
        }
    }
    return out;
}

CoordinatePermutation left_unitor_perm(const BlockShape& a) {
    // unit (x) a -> a: coordinate (0, y) = 0 * d + y relabels to y.
    CoordinatePermutation out;
    out.per_block.reserve(a.size());
    for (const std::int64_t d : a) {
        std::vector<std::int64_t> p(static_cast<std::size_t>(d));
        for (std::int64_t y = 0; y < d; ++y) p[static_cast<std::size_t>(y)] = 0 * d + y;
        out.per_block.push_back(std::move(p));
    }
    return out;
}

CoordinatePermutation right_unitor_perm(const BlockShape& a) {
    // a (x) unit -> a: coordinate (x, 0) = x * 1 + 0 relabels to x.
    CoordinatePermutation out;
    out.per_block.reserve(a.size());
    for (const std::int64_t d : a) {
        std::vector<std::int64_t> p(static_cast<std::size_t>(d));
        for (std::int64_t x = 0; x < d; ++x) p[static_cast<std::size_t>(x)] = x * 1 + 0;
        out.per_block.push_back(std::move(p));
    }
    return out;
}

CoordinatePermutation perm_tensor_id(const CoordinatePermutation& p, const BlockShape& right) {
    CoordinatePermutation out;
    out.per_block.reserve(p.per_block.size() * right.size());
    for (const auto& block : p.per_block) {
        const auto dl = static_cast<std::int64_t>(block.size());
        for (const std::int64_t dr : right) {
            std::vector<std::int64_t> q(static_cast<std::size_t>(dl * dr));
            for (std::int64_t x = 0; x < dl; ++x)
                for (std::int64_t y = 0; y < dr; ++y)
                    q[static_cast<std::size_t>(x * dr + y)] =
                        block[static_cast<std::size_t>(x)] * dr + y;
            out.per_block.push_back(std::move(q));
        }
    }
    return out;
}

CoordinatePermutation id_tensor_perm(const BlockShape& left, const CoordinatePermutation& p) {
    CoordinatePermutation out;
    out.per_block.reserve(left.size() * p.per_block.size());
    for (const std::int64_t dl : left) {
        for (const auto& block : p.per_block) {
            const auto dr = static_cast<std::int64_t>(block.size());
            std::vector<std::int64_t> q(static_cast<std::size_t>(dl * dr));
            for (std::int64_t x = 0; x < dl; ++x)
                for (std::int64_t y = 0; y < dr; ++y)
                    q[static_cast<std::size_t>(x * dr + y)] =
                        x * dr + block[static_cast<std::size_t>(y)];
            out.per_block.push_back(std::move(q));
        }
    }
    return out;
}

PentagonCheck pentagon_check(const BlockShape& a, const BlockShape& b, const BlockShape& c,
                             const BlockShape& d) {
    const BlockShape ab = tensor_shape(a, b);
    const BlockShape cd = tensor_shape(c, d);
    const BlockShape bc = tensor_shape(b, c);

    // Route one: alpha_{a(x)b, c, d} then alpha_{a, b, c(x)d}.
    const CoordinatePermutation route_one =
        associator_perm(ab, c, d).then(associator_perm(a, b, cd));
    // Route two: (alpha_{a,b,c} (x) id_d), alpha_{a, b(x)c, d}, (id_a (x) alpha_{b,c,d}).
    const CoordinatePermutation route_two = perm_tensor_id(associator_perm(a, b, c), d)
                                                .then(associator_perm(a, bc, d))
                                                .then(id_tensor_perm(a, associator_perm(b, c, d)));

    PentagonCheck check;
    check.coordinates_equal = route_one == route_two;
    const CoordinatePermutation units_one = route_one.induced_on_matrix_units();
    const CoordinatePermutation units_two = route_two.induced_on_matrix_units();
    check.matrix_units_equal = units_one == units_two;
    check.coordinate_count = route_one.coordinate_count();
    check.matrix_unit_count = units_one.coordinate_count();
    return check;
}

TriangleCheck triangle_check(const BlockShape& a, const BlockShape& b) {
    const BlockShape unit{1};
    // (a (x) unit) (x) b: associate, then kill the unit on the left of b; or
    // kill the unit on the right of a directly.
    const CoordinatePermutation via_associator =
        associator_perm(a, unit, b).then(id_tensor_perm(a, left_unitor_perm(b)));
    const CoordinatePermutation direct = perm_tensor_id(right_unitor_perm(a), b);

    TriangleCheck check;
    check.equal = via_associator == direct;
    check.coordinate_count = via_associator.coordinate_count();
    return check;
}

namespace {

BlockOperator random_operator(const AlgebraPtr& alg, std::mt19937_64& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<CMatrix> blocks;
    blocks.reserve(static_cast<std::size_t>(alg->prefix_blocks()));
    for (std::int64_t k = 0; k < alg->prefix_blocks(); ++k) {
        const auto d = static_cast<Eigen::Index>(alg->block_dim(k));
        CMatrix m(d, d);
        for (Eigen::Index i = 0; i < d; ++i)
            for (Eigen::Index j = 0; j < d; ++j) m(i, j) = Complex(normal(rng), normal(rng));
        blocks.push_back(std::move(m));
    }
    return BlockOperator::from_blocks(alg, std::move(blocks), TailFormula::zero());
}

CMatrix permutation_matrix(const std::vector<std::int64_t>& perm) {
    const auto d = static_cast<Eigen::Index>(perm.size());
    CMatrix p = CMatrix::Zero(d, d);
    for (Eigen::Index t = 0; t < d; ++t)
        p(t, static_cast<Eigen::Index>(perm[static_cast<std::size_t>(t)])) = Complex(1, 0);
    return p;
}

} // namespace

CoherenceReport coherence_check(const AlgebraPtr& m, const AlgebraPtr& n, const AlgebraPtr& p,
                                std::uint64_t seed) {
    const BlockShape sm = shape_of(m), sn = shape_of(n), sp = shape_of(p);

    CoherenceReport report;
    report.pentagon = pentagon_check(sm, sn, sp, sm);
    report.triangle_left = triangle_check(sm, sn);
    report.triangle_right = triangle_check(sn, sp);

    // Naturality of the associator on random operators: the permutation
    // intertwines the two groupings blockwise.
    std::mt19937_64 rng(seed);
    const BlockOperator x = random_operator(m, rng);
    const BlockOperator y = random_operator(n, rng);
    const BlockOperator z = random_operator(p, rng);
    const BlockOperator grouped_left = tensor_op(tensor_op(x, y), z);
    const BlockOperator grouped_right = tensor_op(x, tensor_op(y, z));
    const CoordinatePermutation alpha = associator_perm(sm, sn, sp);
    double residual = 0.0;
    for (std::size_t b = 0; b < alpha.per_block.size(); ++b) {
        const CMatrix pm = permutation_matrix(alpha.per_block[b]);
        const CMatrix lhs = pm * grouped_left.prefix()[b];
        const CMatrix rhs = grouped_right.prefix()[b] * pm;
        residual = std::max(residual, (lhs - rhs).norm());
    }
    report.naturality_residual = residual;
    return report;
}

double TensorLawReport::worst() const {
    return std::max({product, involution, bilinearity, scalar});
}

namespace {

double blockwise_frobenius(const BlockOperator& a, const BlockOperator& b) {
    double res = 0.0;
    for (std::int64_t k = 0; k < std::max(a.prefix_count(), b.prefix_count()); ++k)
        res = std::max(res, (a.block(k) - b.block(k)).norm());
    return res;
}

} // namespace

TensorLawReport tensor_law_check(const BlockOperator& a, const BlockOperator& b,
                                 const BlockOperator& c, const BlockOperator& d, Complex alpha) {
    TensorLawReport report;
    report.product =
        blockwise_frobenius(tensor_op(a, b) * tensor_op(c, d), tensor_op(a * c, b * d));
    report.involution = blockwise_frobenius(tensor_op(a, b).adjoint(),
                                            tensor_op(a.adjoint(), b.adjoint()));
    const double left = blockwise_frobenius(tensor_op(a + c, b),
                                            tensor_op(a, b) + tensor_op(c, b));
    const double right = blockwise_frobenius(tensor_op(a, b + d),
                                             tensor_op(a, b) + tensor_op(a, d));
    report.bilinearity = std::max(left, right);
    report.scalar = blockwise_frobenius(tensor_op(alpha * a, b), alpha * tensor_op(a, b));
    return report;
}

CenterDescription center(const AlgebraPtr& alg) {
    CenterDescription description;
    if (!alg->has_tail()) description.dimension = alg->prefix_blocks();
    description.trivial = !alg->has_tail() && alg->prefix_blocks() == 1;
    for (std::int64_t k = 0; k < alg->prefix_blocks(); ++k)
        description.prefix_units.push_back(BlockOperator::block_unit(alg, k));
    return description;
}

bool is_factor(const AlgebraPtr& alg) { return !alg->has_tail() && alg->prefix_blocks() == 1; }

} // namespace mvnlab
