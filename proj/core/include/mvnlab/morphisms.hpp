#pragma once

#include <cstdint>
#include <vector>

#include "mvnlab/block_operator.hpp"

// Trace-preserving *-homomorphisms between block algebras, in the four shapes
// that matter for direct sums of matrix blocks: identity, a permutation of the
// finite prefix, blockwise unitary conjugation, and ampliation by a tensor
// factor.  Each morphism validates its data on construction (BadMorphism) and
// extends blockwise to the affiliated (possibly unbounded) operators.

namespace mvnlab {

enum class MorphismKind { Identity, BlockPermutation, UnitaryConjugation, Ampliation };

class Morphism {
public:
    static Morphism identity(AlgebraPtr alg);

    // perm[k] = source block feeding target slot k; acts on the finite prefix
    // only (tail blocks stay put).  target defaults to the source algebra, so
    // slots may only exchange blocks of equal dimension and weight.
    static Morphism block_permutation(AlgebraPtr source, std::vector<std::int64_t> perm,
                                      AlgebraPtr target = nullptr);

    // x_k -> u_k x_k u_k^* on the prefix; scalar tail blocks are untouched.
    static Morphism unitary_conjugation(AlgebraPtr alg, std::vector<linops::CMatrix> unitaries);

    // x -> x (tensor) 1_factor per block; factor > 1 needs a tail-free source.
    static Morphism ampliation(AlgebraPtr source, std::int64_t factor);

    MorphismKind kind() const noexcept { return kind_; }
    const AlgebraPtr& source() const noexcept { return source_; }
    const AlgebraPtr& target() const noexcept { return target_; }
    const std::vector<std::int64_t>& permutation() const noexcept { return perm_; }
    const std::vector<linops::CMatrix>& unitaries() const noexcept { return unitaries_; }
    std::int64_t ampliation_factor() const noexcept { return factor_; }

private:
    Morphism() = default;

    MorphismKind kind_ = MorphismKind::Identity;
    AlgebraPtr source_;
    AlgebraPtr target_;
    std::vector<std::int64_t> perm_;
    std::vector<linops::CMatrix> unitaries_;
    std::int64_t factor_ = 1;
};

// Applies the morphism blockwise; defined for every affiliated operator.
BlockOperator extend_morphism(const Morphism& phi, const BlockOperator& x);

} // namespace mvnlab
