#include "mvnlab/morphisms.hpp"

#include <algorithm>
#include <cmath>

#include "mvnlab/errors.hpp"

namespace mvnlab {

using linops::CMatrix;

Morphism Morphism::identity(AlgebraPtr alg) {
    if (!alg) throw BadMorphism("identity morphism needs an algebra");
    Morphism phi;
    phi.kind_ = MorphismKind::Identity;
    phi.source_ = alg;
    phi.target_ = std::move(alg);
    return phi;
}

Morphism Morphism::block_permutation(AlgebraPtr source, std::vector<std::int64_t> perm,
                                     AlgebraPtr target) {
    if (!source) throw BadMorphism("block permutation needs a source algebra");
    if (!target) target = source;
    const std::int64_t p = source->prefix_blocks();
    if (static_cast<std::int64_t>(perm.size()) != p)
        throw BadMorphism("permutation must cover exactly the finite block prefix");
    if (target->prefix_blocks() != p || target->has_tail() != source->has_tail())
        throw BadMorphism("permutation target has a different block layout");
    if (source->has_tail() &&
        (source->tail_ratio() != target->tail_ratio() ||
         source->tail_mass() != target->tail_mass()))
        throw BadMorphism("permutation target has a different tail");

    std::vector<bool> seen(static_cast<std::size_t>(p), false);
    for (std::int64_t k = 0; k < p; ++k) {
        const std::int64_t s = perm[static_cast<std::size_t>(k)];
        if (s < 0 || s >= p) throw BadMorphism("permutation index out of range");
        if (seen[static_cast<std::size_t>(s)]) throw BadMorphism("permutation repeats a block");
        seen[static_cast<std::size_t>(s)] = true;
        if (target->block_dim(k) != source->block_dim(s))
            throw BadMorphism("cannot exchange blocks of different dimension");
        if (target->weight(k) != source->weight(s))
            throw BadMorphism("cannot exchange blocks of different weight");
    }

    Morphism phi;
    phi.kind_ = MorphismKind::BlockPermutation;
    phi.source_ = std::move(source);
    phi.target_ = std::move(target);
    phi.perm_ = std::move(perm);
    return phi;
}

Morphism Morphism::unitary_conjugation(AlgebraPtr alg, std::vector<CMatrix> unitaries) {
    if (!alg) throw BadMorphism("unitary conjugation needs an algebra");
    if (static_cast<std::int64_t>(unitaries.size()) != alg->prefix_blocks())
        throw BadMorphism("need one unitary per prefix block");
    for (std::int64_t k = 0; k < alg->prefix_blocks(); ++k) {
        const auto& u = unitaries[static_cast<std::size_t>(k)];
        if (u.rows() != alg->block_dim(k) || u.cols() != alg->block_dim(k))
            throw BadMorphism("conjugating unitary has the wrong dimension");
        if (!linops::is_unitary(u)) throw BadMorphism("conjugating matrix is not unitary");
    }
    Morphism phi;
    phi.kind_ = MorphismKind::UnitaryConjugation;
    phi.source_ = alg;
    phi.target_ = std::move(alg);
    phi.unitaries_ = std::move(unitaries);
    return phi;
}

Morphism Morphism::ampliation(AlgebraPtr source, std::int64_t factor) {
    if (!source) throw BadMorphism("ampliation needs a source algebra");
    if (factor < 1) throw BadMorphism("ampliation factor must be at least 1");
    if (factor > 1 && source->has_tail())
        throw BadMorphism("ampliation past factor 1 needs a tail-free source");

    AlgebraPtr target;
    if (factor == 1) {
        target = source;
    } else {
        std::vector<int> shape = source->shape_prefix();
        for (auto& d : shape) d = static_cast<int>(d * factor);
        target = FiniteBlockAlgebra::make(shape, source->weight_prefix());
    }

    Morphism phi;
    phi.kind_ = MorphismKind::Ampliation;
    phi.source_ = std::move(source);
    phi.target_ = std::move(target);
    phi.factor_ = factor;
    return phi;
}

BlockOperator extend_morphism(const Morphism& phi, const BlockOperator& x) {
    if (!(*x.algebra() == *phi.source()))
        throw BadMorphism("operator does not live over the morphism source");

    switch (phi.kind()) {
        case MorphismKind::Identity:
            return x;

        case MorphismKind::BlockPermutation: {
            const std::int64_t p = phi.source()->prefix_blocks();
            std::vector<CMatrix> blocks;
            blocks.reserve(static_cast<std::size_t>(x.prefix_count()));
            for (std::int64_t k = 0; k < p; ++k)
                blocks.push_back(x.block(phi.permutation()[static_cast<std::size_t>(k)]));
            for (std::int64_t k = p; k < x.prefix_count(); ++k) blocks.push_back(x.block(k));
            return BlockOperator::from_blocks(phi.target(), std::move(blocks), x.tail());
        }

        case MorphismKind::UnitaryConjugation: {
            std::vector<CMatrix> blocks;
            blocks.reserve(static_cast<std::size_t>(x.prefix_count()));
            for (std::int64_t k = 0; k < x.prefix_count(); ++k) {
                if (k < static_cast<std::int64_t>(phi.unitaries().size())) {
                    const auto& u = phi.unitaries()[static_cast<std::size_t>(k)];
                    blocks.push_back(u * x.block(k) * u.adjoint());
                } else {
                    blocks.push_back(x.block(k)); // materialized scalar tail block
                }
            }
            return BlockOperator::from_blocks(phi.target(), std::move(blocks), x.tail());
        }

        case MorphismKind::Ampliation: {
            if (phi.ampliation_factor() == 1) return x;
            const auto m = static_cast<Eigen::Index>(phi.ampliation_factor());
            std::vector<CMatrix> blocks;
            blocks.reserve(static_cast<std::size_t>(x.prefix_count()));
            for (std::int64_t k = 0; k < x.prefix_count(); ++k)
                blocks.push_back(linops::kron(x.block(k), CMatrix::Identity(m, m)));
            return BlockOperator::from_blocks(phi.target(), std::move(blocks), TailFormula::zero());
        }
    }
    throw BadMorphism("unknown morphism kind");
}

} // namespace mvnlab
