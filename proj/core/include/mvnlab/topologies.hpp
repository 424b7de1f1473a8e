#pragma once

#include <cstdint>
#include <vector>

#include "mvnlab/block_operator.hpp"

// Computable metrics for the operator topologies on a block algebra.  Each
// metric sums per-block contributions against the canonical separating family
//     xi_k = first standard basis vector of block k,   weight 2^{-(k+1)},
// and every reported value comes with a certified truncation bound: the true
// metric lies within [value, value + bound].  Block-diagonality makes each
// term exact per block, so the only error sources are the cut-off block index,
// the cut-off time horizon, and the time grid (bounded by an exact Lipschitz
// slack; tail blocks are scalar and need no grid at all).

namespace mvnlab {

struct SeparatingFamily {
    static BlockVector xi(const FiniteBlockAlgebra& alg, std::int64_t k) {
        return BlockVector::basis_vector(alg, k, 0);
    }
    static double weight(std::int64_t k) { return std::pow(0.5, static_cast<double>(k + 1)); }
};

struct MetricValue {
    double value = 0.0;
    double bound = 0.0;  // certified truncation + grid slack
};

// Strong-resolvent metric: sum_k 2^{-(k+1)} ( ||(Re A - i)^{-1} xi_k - (Re B - i)^{-1} xi_k||
//                                           +  same with Im ).
MetricValue srt_dist(const BlockOperator& a, const BlockOperator& b, double trunc_tol = 1e-9);

struct SetParams {
    int m_max = 12;        // time horizons [-m, m], m = 1..m_max
    double t_step = 0.02;  // grid step on matrix blocks (scalar blocks are exact)
    double trunc_tol = 1e-9;
};

// Strong-exponential metric:
//   sum_k 2^{-(k+1)} sum_{m>=1} 2^{-m} sup_{|t|<=m} ( ||e^{it Re A} xi_k - e^{it Re B} xi_k||
//                                                   +  same with Im ).
MetricValue set_dist(const BlockOperator& a, const BlockOperator& b, const SetParams& p = {});

// Trace-measure F-metric: rho(A - B) with
//   rho(X) = inf { eps > 0 : tau(E_{|X|}((eps, inf))) <= eps },
// solved by bisection to kMeasureTol; spectral mass is singular-value counts
// on the prefix and exact geometric sums on the tail.
inline constexpr double kMeasureTol = 1e-10;
double measure_dist(const BlockOperator& a, const BlockOperator& b);

// Strong-operator metric sum_k 2^{-(k+1)} ||(x - y) xi_k|| for bounded x, y;
// throws Unbounded otherwise.
MetricValue sot_dist(const BlockOperator& x, const BlockOperator& y, double trunc_tol = 1e-9);

// p_k(x) = ||x_k|| (operator norm of one block).
double atomic_seminorm(const BlockOperator& x, std::int64_t k);

// Side-by-side convergence table of a sequence against its limit.
struct ConvergenceRow {
    int index = 0;
    MetricValue srt;
    MetricValue set;
    double measure = 0.0;
    MetricValue sot;
    bool sot_defined = false;  // false when either operator is unbounded
};

struct ConvergenceReport {
    std::vector<ConvergenceRow> rows;
    double threshold = 0.0;
    // Verdicts: every row in the last quartile certified below the threshold.
    bool srt_converges = false;
    bool set_converges = false;
    bool measure_converges = false;
    bool sot_converges = false;
};

ConvergenceReport convergence_report(const std::vector<BlockOperator>& seq,
                                     const BlockOperator& limit, double threshold,
                                     const SetParams& set_params = {});

} // namespace mvnlab
