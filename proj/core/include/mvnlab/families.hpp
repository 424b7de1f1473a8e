#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "mvnlab/block_operator.hpp"

// Deterministic generator families of operator sequences with known
// convergence behavior.  Every member is produced by a pure function of its
// index (randomness comes from per-index child streams of a splitmix mixer),
// so parallel and sequential evaluation agree bit for bit.

namespace mvnlab {

// splitmix64 generator with cheap derivation of independent child streams.
class Rng {
public:
    explicit Rng(std::uint64_t seed) noexcept : seed_(seed), state_(seed) {}

    std::uint64_t next() noexcept;
    double uniform() noexcept;                    // [0, 1)
    double uniform(double lo, double hi) noexcept;
    double normal() noexcept;                     // Box-Muller, one value per call
    Complex complex_normal() noexcept;
    Rng child(std::uint64_t stream) const noexcept;

private:
    std::uint64_t seed_;
    std::uint64_t state_;
};

struct Family {
    std::string name;
    std::string summary;
    bool expected_converge = true;
    bool bounded = false;      // every member has sup_norm <= 2
    bool self_adjoint = false; // every member and the limit are self-adjoint
    std::int64_t length = 26;
    AlgebraPtr algebra;
    BlockOperator limit;
    std::function<BlockOperator(std::int64_t)> member;
};

// All bundled family names, convergent ones first.
const std::vector<std::string>& family_names();

// Builds one bundled family; unknown names raise ConfigError.
Family make_family(const std::string& name, std::uint64_t seed);

std::vector<Family> all_families(std::uint64_t seed);

// Random blockwise-Hermitian operator with op-norm at most `scale` (tail-free
// part only; over finite algebras the whole operator).
BlockOperator random_hermitian(const AlgebraPtr& alg, Rng& rng, double scale);
// Random blockwise skew-Hermitian operator with op-norm at most `scale`.
BlockOperator random_skew(const AlgebraPtr& alg, Rng& rng, double scale);
// Random operator with independent complex-normal entries on the prefix.
BlockOperator random_prefix_operator(const AlgebraPtr& alg, Rng& rng);

// Shared test algebras.
AlgebraPtr standard_infinite_algebra(); // (2,3,1,2) prefix + geometric tail
AlgebraPtr standard_finite_algebra();   // (2,3,4)
AlgebraPtr diagonal_algebra();          // all 1x1 blocks, weights 2^{-(k+1)}

} // namespace mvnlab
