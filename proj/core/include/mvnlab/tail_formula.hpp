#pragma once

#include <complex>
#include <cstdint>
#include <limits>
#include <vector>

#include "mvnlab/errors.hpp"

// Closed-form scalar tails.  A formula is either a term sum
//     f(k) = sum_j  c_j * k^(d_j) * exp(a_j * k)
// or exp(g) of such a sum (the image of a tail under the exponential map).
// The family is closed under +, *, conjugation and index shifts — with the
// exp wrapper folded back into a plain term whenever the exponent is affine
// in k — so blockwise *-algebra arithmetic on tails is exact.  Combinations
// that leave the family throw GrammarOverflow; the caller's remedy is to
// materialize more explicit prefix blocks.
//
// Formulas are only ever evaluated at integer k >= 0, so Im(a_j) is
// canonicalized into [0, 2pi): it changes nothing at integers and makes
// structural zero tests and growth classification decisive.

namespace mvnlab {

using Complex = std::complex<double>;

struct TailTerm {
    Complex coeff{0.0, 0.0};
    int power = 0;            // exponent of k, >= 0
    Complex rate{0.0, 0.0};   // exponent rate a, Im in [0, 2pi)
};

class TailFormula {
public:
    // Guard rails for symbolic blowup; past these the formula is declared
    // out-of-grammar rather than silently inaccurate.
    static constexpr int kMaxTerms = 128;
    static constexpr int kMaxPower = 40;

    TailFormula() = default;  // zero

    static TailFormula zero();
    static TailFormula constant(Complex c);
    static TailFormula monomial(Complex c, int power, Complex rate = Complex(0, 0));
    static TailFormula sum_of(std::vector<TailTerm> terms);
    // exp of a term-sum formula; never leaves the grammar.
    static TailFormula exp_of(const TailFormula& arg);

    bool is_exp_wrapped() const noexcept { return is_exp_; }
    const std::vector<TailTerm>& terms() const noexcept { return terms_; }

    Complex value(std::int64_t k) const;

    bool is_zero() const noexcept;
    // True when f(k) is the same constant for every k; writes it if asked.
    bool is_constant(Complex* out = nullptr) const;
    // True when |f(k)| == 1 for all k, decided structurally.
    bool is_unimodular() const;
    // True when f(k) is real for all integer k (f == conj f structurally).
    bool is_real_valued() const;

    TailFormula conjugated() const;
    // Substitutes k -> k - shift (reindexing after block concatenation).
    TailFormula shifted(std::int64_t shift) const;

    TailFormula operator-() const;
    friend TailFormula operator+(const TailFormula& a, const TailFormula& b);
    friend TailFormula operator-(const TailFormula& a, const TailFormula& b);
    friend TailFormula operator*(const TailFormula& a, const TailFormula& b);
    friend TailFormula operator*(Complex s, const TailFormula& f);

    bool equals(const TailFormula& other) const;

    // Certified behavior of |f(k)| over k >= start.
    struct AbsProfile {
        bool bounded = false;
        bool decays_to_zero = false;
        // Upper bound on sup_{k>=start} |f(k)|; infinity when unbounded.
        double sup_upper = std::numeric_limits<double>::infinity();
        bool sup_exact = false;
    };
    AbsProfile abs_profile(std::int64_t start) const;

    // Splits {k >= start} by |f(k)| > threshold.  Indices in
    // [start, scan_end] are listed explicitly; `rest_all` says whether every
    // k > scan_end exceeds the threshold (certified by monotone envelopes) or
    // none does.  Throws GrammarOverflow when neither side can be certified.
    struct ExceedSplit {
        std::vector<std::int64_t> exceeding;
        std::int64_t scan_end = 0;
        bool rest_all = false;
    };
    ExceedSplit exceed_split(double threshold, std::int64_t start) const;

private:
    std::vector<TailTerm> terms_;
    bool is_exp_ = false;

    void normalize();
};

// sum_{k >= start} k^power * z^k for |z| < 1, in closed form (Stirling-number
// expansion of the full series minus the explicit head).  Throws
// DivergentTail when |z| >= 1.
Complex geometric_power_sum(Complex z, int power, std::int64_t start);

} // namespace mvnlab
