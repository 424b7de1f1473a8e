#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "mvnlab/errors.hpp"
#include "mvnlab/linops.hpp"

// A finite von Neumann algebra presented as a weighted direct sum of matrix
// blocks: an explicit prefix of dimensions n_0..n_{P-1} with weights
// w_0..w_{P-1}, optionally extended by infinitely many 1x1 blocks whose
// weights follow a geometric rule.  The geometric tail carries exactly the
// mass 1 - sum(prefix), so the normalized trace has total weight 1 with no
// numerically summed series anywhere.

namespace mvnlab {

class FiniteBlockAlgebra {
public:
    // Finite algebra: weights must sum to 1 (within kMassTol).
    static std::shared_ptr<const FiniteBlockAlgebra> make(std::vector<int> shape,
                                                          std::vector<double> weights);
    // Infinite algebra: blocks k >= shape.size() are 1x1 with weights
    // (1 - sum(weights)) * (1 - ratio) * ratio^{k - P}.
    static std::shared_ptr<const FiniteBlockAlgebra> make_with_tail(std::vector<int> shape,
                                                                    std::vector<double> weights,
                                                                    double tail_ratio);

    static constexpr double kMassTol = 1e-12;

    bool has_tail() const noexcept { return has_tail_; }
    std::size_t prefix_blocks() const noexcept { return shape_.size(); }
    // Total number of blocks for finite algebras; nullopt when infinite.
    std::optional<std::int64_t> block_count() const;

    // Dimension of block k (1 for every tail block).
    int block_dim(std::int64_t k) const;
    double weight(std::int64_t k) const;
    double tail_ratio() const noexcept { return tail_ratio_; }
    double tail_mass() const noexcept { return tail_mass_; }

    // sum_{k >= k0} w_k, closed form.
    double weight_mass_from(std::int64_t k0) const;
    // Total Hilbert dimension (finite algebras only).
    std::int64_t total_dim() const;

    const std::vector<int>& shape_prefix() const noexcept { return shape_; }
    const std::vector<double>& weight_prefix() const noexcept { return weights_; }

    friend bool operator==(const FiniteBlockAlgebra& a, const FiniteBlockAlgebra& b);

private:
    FiniteBlockAlgebra() = default;

    std::vector<int> shape_;
    std::vector<double> weights_;
    bool has_tail_ = false;
    double tail_ratio_ = 0.0;
    double tail_mass_ = 0.0;
};

using AlgebraPtr = std::shared_ptr<const FiniteBlockAlgebra>;

// Finitely supported vector in the direct-sum Hilbert space.
struct BlockVectorEntry {
    std::int64_t block = 0;
    linops::CVector coeffs;
};

struct BlockVector {
    std::vector<BlockVectorEntry> entries;  // ascending block index

    static BlockVector basis_vector(const FiniteBlockAlgebra& alg, std::int64_t block,
                                    int coordinate = 0);
    double norm() const;
};

} // namespace mvnlab
