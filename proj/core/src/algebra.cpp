#include "mvnlab/algebra.hpp"

#include <cmath>

namespace mvnlab {

namespace {

void check_common(const std::vector<int>& shape, const std::vector<double>& weights) {
    if (shape.size() != weights.size())
        throw BadWeights("algebra: shape and weight prefixes must have equal length");
    if (shape.empty()) throw BadWeights("algebra: at least one explicit block is required");
    for (int n : shape)
        if (n < 1) throw BadWeights("algebra: block dimensions must be >= 1");
    for (double w : weights)
        if (!(w > 0.0) || !std::isfinite(w))
            throw BadWeights("algebra: weights must be positive and finite");
}

double prefix_sum(const std::vector<double>& weights) {
    double s = 0.0;
    for (double w : weights) s += w;
    return s;
}

} // namespace

std::shared_ptr<const FiniteBlockAlgebra> FiniteBlockAlgebra::make(std::vector<int> shape,
                                                                   std::vector<double> weights) {
    check_common(shape, weights);
    const double sum = prefix_sum(weights);
    if (std::abs(sum - 1.0) > kMassTol)
        throw BadWeights("algebra: weights of a tail-free algebra must sum to 1, got " +
                         std::to_string(sum));
    auto alg = std::shared_ptr<FiniteBlockAlgebra>(new FiniteBlockAlgebra());
    alg->shape_ = std::move(shape);
    alg->weights_ = std::move(weights);
    alg->has_tail_ = false;
    return alg;
}

std::shared_ptr<const FiniteBlockAlgebra> FiniteBlockAlgebra::make_with_tail(
    std::vector<int> shape, std::vector<double> weights, double tail_ratio) {
    check_common(shape, weights);
    if (!(tail_ratio > 0.0) || !(tail_ratio < 1.0))
        throw BadWeights("algebra: tail ratio must lie in (0, 1), got " +
                         std::to_string(tail_ratio));
    const double sum = prefix_sum(weights);
    if (!(sum < 1.0 - kMassTol))
        throw BadWeights(
            "algebra: prefix weights must leave positive mass for the geometric tail, sum = " +
            std::to_string(sum));
    auto alg = std::shared_ptr<FiniteBlockAlgebra>(new FiniteBlockAlgebra());
    alg->shape_ = std::move(shape);
    alg->weights_ = std::move(weights);
    alg->has_tail_ = true;
    alg->tail_ratio_ = tail_ratio;
    alg->tail_mass_ = 1.0 - sum;
    return alg;
}

std::optional<std::int64_t> FiniteBlockAlgebra::block_count() const {
    if (has_tail_) return std::nullopt;
    return static_cast<std::int64_t>(shape_.size());
}

int FiniteBlockAlgebra::block_dim(std::int64_t k) const {
    if (k < 0) throw DimensionMismatch("algebra: negative block index");
    if (k < static_cast<std::int64_t>(shape_.size())) return shape_[static_cast<std::size_t>(k)];
    if (!has_tail_)
        throw DimensionMismatch("algebra: block index " + std::to_string(k) +
                                " past the end of a tail-free algebra");
    return 1;
}

double FiniteBlockAlgebra::weight(std::int64_t k) const {
    if (k < 0) throw DimensionMismatch("algebra: negative block index");
    if (k < static_cast<std::int64_t>(weights_.size())) return weights_[static_cast<std::size_t>(k)];
    if (!has_tail_)
        throw DimensionMismatch("algebra: block index " + std::to_string(k) +
                                " past the end of a tail-free algebra");
    const auto p = static_cast<std::int64_t>(weights_.size());
    return tail_mass_ * (1.0 - tail_ratio_) * std::pow(tail_ratio_, static_cast<double>(k - p));
}

double FiniteBlockAlgebra::weight_mass_from(std::int64_t k0) const {
    const auto p = static_cast<std::int64_t>(weights_.size());
    double mass = 0.0;
    for (std::int64_t k = std::max<std::int64_t>(k0, 0); k < p; ++k)
        mass += weights_[static_cast<std::size_t>(k)];
    if (!has_tail_) return mass;
    if (k0 <= p) return mass + tail_mass_;
    return tail_mass_ * std::pow(tail_ratio_, static_cast<double>(k0 - p));
}

std::int64_t FiniteBlockAlgebra::total_dim() const {
    if (has_tail_)
        throw DimensionMismatch("algebra: total dimension of an infinite direct sum");
    std::int64_t d = 0;
    for (int n : shape_) d += n;
    return d;
}

bool operator==(const FiniteBlockAlgebra& a, const FiniteBlockAlgebra& b) {
    return a.shape_ == b.shape_ && a.weights_ == b.weights_ && a.has_tail_ == b.has_tail_ &&
           a.tail_ratio_ == b.tail_ratio_;
}

BlockVector BlockVector::basis_vector(const FiniteBlockAlgebra& alg, std::int64_t block,
                                      int coordinate) {
    const int dim = alg.block_dim(block);
    if (coordinate < 0 || coordinate >= dim)
        throw DimensionMismatch("basis_vector: coordinate out of range for block");
    linops::CVector v = linops::CVector::Zero(dim);
    v(coordinate) = linops::Complex(1, 0);
    return BlockVector{{BlockVectorEntry{block, std::move(v)}}};
}

double BlockVector::norm() const {
    double s = 0.0;
    for (const auto& e : entries) s += e.coeffs.squaredNorm();
    return std::sqrt(s);
}

} // namespace mvnlab
