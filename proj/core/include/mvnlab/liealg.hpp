#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mvnlab/block_operator.hpp"
#include "mvnlab/morphisms.hpp"
#include "mvnlab/topologies.hpp"

// Unitary subgroups of a block algebra and their Lie algebras of skew-adjoint
// generators: membership certificates, Trotter / commutator product formulas,
// induced Lie-algebra homomorphisms, and an exponential-injectivity probe that
// separates the finite-dimensional case (positive injectivity radius) from the
// infinite one (explicit skew elements arbitrarily close to 0 whose
// exponential is the identity).

namespace mvnlab {

// Blockwise exponential; the tail exponential stays in closed form, so tail
// blocks carry no numerical error.
BlockOperator exp_op(const BlockOperator& a);

// [a, b] = ab - ba.
BlockOperator bracket(const BlockOperator& a, const BlockOperator& b);

// a* = -a: within tol on prefix blocks, certified sup on the tail.
bool is_skew_adjoint(const BlockOperator& a, double tol = linops::kHermitianTol);

enum class SubgroupKind {
    FullUnitary,         // all unitaries
    CommutantFixed,      // unitaries commuting with a fixed bounded set
    BlockDeterminantOne, // det = 1 on every block
    DiagonalUnitaries,   // diagonal in the standard basis
};

struct SubgroupSpec {
    SubgroupKind kind = SubgroupKind::FullUnitary;
    std::vector<BlockOperator> fixed; // the commutant constraints, if any
    double tolerance = 1e-8;

    static SubgroupSpec full_unitary(double tol = 1e-8);
    // every constraint must be bounded (Unbounded otherwise)
    static SubgroupSpec commutant_fixed(std::vector<BlockOperator> s, double tol = 1e-8);
    static SubgroupSpec block_determinant_one(double tol = 1e-8);
    static SubgroupSpec diagonal_unitaries(double tol = 1e-8);
    const char* name() const noexcept;
};

// Default parameter samples for one-parameter-subgroup membership; the
// irrational ratios rule out accidental 2*pi phase coincidences, so sampled
// membership pins down membership at every t for the bundled subgroup kinds.
const std::vector<double>& lie_t_samples();

// 0 for members; sup-style defect otherwise.  Prefix defects are exact norms,
// tail defects certified upper bounds, +inf when nothing can be certified.
// Commutant defects are normalized by 1 + ||s||.
double group_residual(const SubgroupSpec& g, const BlockOperator& u);

// Skewness defect plus the worst group_residual of exp(t a) over the samples.
double lie_algebra_residual(const SubgroupSpec& g, const BlockOperator& a,
                            const std::vector<double>& t_samples = lie_t_samples());

// Throws Unbounded when u is not a bounded operator.
bool in_group(const SubgroupSpec& g, const BlockOperator& u);
bool in_lie_algebra(const SubgroupSpec& g, const BlockOperator& a,
                    const std::vector<double>& t_samples = lie_t_samples());

// Per-element membership evidence: one residual per sampled t.
struct MembershipSample {
    double t = 0.0;
    double residual = 0.0;
};
struct ElementReport {
    std::string element;
    double skew_residual = 0.0;
    std::vector<MembershipSample> samples;
    double worst() const;
    bool pass(double tol) const { return worst() <= tol; }
};
ElementReport element_membership_report(const SubgroupSpec& g, std::string element,
                                        const BlockOperator& a,
                                        const std::vector<double>& t_samples = lie_t_samples());

// Closure of Lie(G) under sum, real scaling and bracket, element by element.
// Both generators must already lie in Lie(G) (PreconditionFailed otherwise).
struct ClosureReport {
    std::vector<ElementReport> elements;
    double tolerance = 1e-8;
    double worst() const;
    bool all_pass() const;
};
ClosureReport lie_closure_check(const SubgroupSpec& g, const BlockOperator& a,
                                const BlockOperator& b,
                                const std::vector<double>& scalars = {0.75, -1.0},
                                const std::vector<double>& t_samples = lie_t_samples());

// (e^{tA/n} e^{tB/n})^n for skew-adjoint a, b; converges to e^{t(a+b)} at rate
// O(1/n) and is exact at every n when a and b commute.  Tail blocks are
// scalars, so the tail is the exact limit at every n.
BlockOperator trotter_product(const BlockOperator& a, const BlockOperator& b, double t,
                              std::int64_t n);

// (e^{-sA} e^{-sB} e^{sA} e^{sB})^{n^2} with s = sqrt(|t|)/n (operands swap
// for t < 0).  Converges to e^{t[a,b]}; exactly the identity when a and b
// commute.
BlockOperator nelson_product(const BlockOperator& a, const BlockOperator& b, double t,
                             std::int64_t n);

// sup-norm distance between a product-formula approximant and its target.
double product_formula_error(const BlockOperator& approx, const BlockOperator& target);

// The unique blockwise extension of phi to skew generators (just the morphism
// applied to the operator; skewness is preserved by all four morphism kinds).
BlockOperator induced_lie_hom(const Morphism& phi, const BlockOperator& x);

// Evidence that the induced map is a Lie-algebra homomorphism compatible with
// the exponential: phi(exp(t x)) = exp(t phi(x)) and bracket equivariance.
struct LieHomReport {
    double linearity = 0.0;  // ||phi(x + y) - phi(x) - phi(y)||
    double bracket = 0.0;    // ||phi([x, y]) - [phi(x), phi(y)]||
    double exp_compat = 0.0; // max_t ||phi(exp(t x)) - exp(t phi(x))||
    double worst() const;
};
LieHomReport induced_lie_hom_check(const Morphism& phi, const BlockOperator& x,
                                   const BlockOperator& y,
                                   const std::vector<double>& t_samples = lie_t_samples());

struct InjectivityProbe {
    bool finite = false;            // algebra is finite-dimensional
    double radius = 0.0;            // injectivity radius (finite case): pi
    double round_trip_residual = 0; // finite case: max ||log(exp x) - x||
    std::optional<BlockOperator> witness; // infinite case: skew x != 0, e^x = 1
    bool witness_exp_is_identity = false; // certified exactly via the spectrum
    double generic_exp_residual = 0.0;    // numeric exp cross-check on witness
    MetricValue srt_to_zero;              // how close the witness sits to 0
};
// Finite algebras: checks log(exp x) = x on `n` random skew samples of norm
// below pi.  Infinite algebras: builds the witness 2*pi*i * p_n on block n.
InjectivityProbe exp_injectivity_probe(const AlgebraPtr& alg, std::int64_t n = 6,
                                       std::uint64_t seed = 0x5eed);

} // namespace mvnlab
