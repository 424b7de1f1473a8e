#include "mvnlab/tail_formula.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>

namespace mvnlab {

namespace {

constexpr double kTwoPi = 6.28318530717958647692;
// Iteration guard for envelope certification scans.
constexpr std::int64_t kScanLimit = 200000;

double im_mod_2pi(double im) {
    double m = std::fmod(im, kTwoPi);
    if (m < 0) m += kTwoPi;
    // fmod can land exactly on 2pi after the correction when im is a tiny
    // negative; fold that back to 0.
    if (m >= kTwoPi) m -= kTwoPi;
    return m;
}

Complex eval_term(const TailTerm& t, std::int64_t k) {
    if (k == 0) return t.power > 0 ? Complex(0, 0) : t.coeff;
    // k^d e^{ak} = exp(d ln k + a k); stable for large k in either direction.
    const double kk = static_cast<double>(k);
    Complex expo = t.rate * kk + Complex(t.power * std::log(kk), 0.0);
    return t.coeff * std::exp(expo);
}

bool rate_less(const Complex& a, const Complex& b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
}

bool term_order(const TailTerm& a, const TailTerm& b) {
    if (a.power != b.power) return a.power < b.power;
    return rate_less(a.rate, b.rate);
}

// ---------------------------------------------------------------------------
// Real signed envelopes sum_j c_j k^d_j e^{alpha_j k} (c_j, alpha_j real).
// These carry the certified monotone reasoning for sup/threshold questions.

struct EnvTerm {
    double coeff = 0.0;
    int power = 0;
    double alpha = 0.0;
};

double eval_env_term(const EnvTerm& t, std::int64_t k) {
    if (k == 0) return t.power > 0 ? 0.0 : t.coeff;
    const double kk = static_cast<double>(k);
    return t.coeff * std::exp(t.power * std::log(kk) + t.alpha * kk);
}

struct Envelope {
    std::vector<EnvTerm> terms;

    void add(double coeff, int power, double alpha) {
        if (coeff == 0.0) return;
        for (auto& t : terms) {
            if (t.power == power && t.alpha == alpha) {
                t.coeff += coeff;
                return;
            }
        }
        terms.push_back(EnvTerm{coeff, power, alpha});
    }

    void prune() {
        std::erase_if(terms, [](const EnvTerm& t) { return t.coeff == 0.0; });
    }

    double value(std::int64_t k) const {
        double v = 0.0;
        for (const auto& t : terms) v += eval_env_term(t, k);
        return v;
    }

    // Index past which every |term| envelope is non-increasing: beyond the
    // peak d/(-alpha) of each decaying factor (growing factors have none).
    std::int64_t decay_peak() const {
        double peak = 0.0;
        for (const auto& t : terms)
            if (t.alpha < 0.0) peak = std::max(peak, static_cast<double>(t.power) / -t.alpha);
        return static_cast<std::int64_t>(std::ceil(peak));
    }

    // Leading term under the (alpha, power) growth order; nullptr when empty.
    const EnvTerm* leading() const {
        const EnvTerm* best = nullptr;
        for (const auto& t : terms) {
            if (!best || t.alpha > best->alpha ||
                (t.alpha == best->alpha && t.power > best->power))
                best = &t;
        }
        return best;
    }

    // Sum of |c_j| k^d e^{alpha k}; an upper bound for |E(k)|, monotone
    // non-increasing beyond decay_peak() when every alpha < 0.
    double abs_value(std::int64_t k) const {
        double v = 0.0;
        for (const auto& t : terms) v += std::abs(eval_env_term(t, k));
        return v;
    }

    // Smallest certified k0 >= start-1 with E(k) <= threshold for all k > k0,
    // or nullopt when no such index can be certified.
    std::optional<std::int64_t> eventually_below(double threshold, std::int64_t start) const;

    // Certified upper bound for sup_{k >= start} E(k); +inf when unbounded
    // above.  `exact` is set when the bound is attained (single-term case).
    double sup_upper(std::int64_t start, bool* exact = nullptr) const;
};

std::optional<std::int64_t> Envelope::eventually_below(double threshold,
                                                       std::int64_t start) const {
    if (terms.empty()) return threshold >= 0.0 ? std::optional(start - 1) : std::nullopt;

    const EnvTerm* lead = leading();
    const bool grows = lead->alpha > 0.0 || (lead->alpha == 0.0 && lead->power > 0);

    if (!grows) {
        // Split constants from decaying terms: E(k) = c0 + D(k), |D| <= B(k)
        // with B monotone non-increasing beyond the decay peaks.
        double c0 = 0.0;
        Envelope decay;
        for (const auto& t : terms) {
            if (t.alpha == 0.0 && t.power == 0)
                c0 += t.coeff;
            else
                decay.terms.push_back(t);
        }
        if (decay.terms.empty()) return c0 <= threshold ? std::optional(start - 1) : std::nullopt;
        if (c0 > threshold) return std::nullopt;  // B > 0 forever, never certifiably below
        std::int64_t k = std::max(start - 1, decay.decay_peak());
        for (std::int64_t i = 0; i < kScanLimit; ++i, ++k) {
            if (c0 + decay.abs_value(k + 1) <= threshold) return k;
        }
        return std::nullopt;
    }

    if (lead->coeff > 0.0) return std::nullopt;  // E -> +inf along the leading term

    // Leading coefficient negative: E(k) <= -|u| W(k) + R(k) with
    // W = k^dm e^{alpha_m k} increasing for k >= 1.  Each |rest|/W ratio is
    // k^{d'-dm} e^{(a'-am)k}, non-increasing past its own peak, so once
    // R <= (|u|/2) W holds beyond all ratio peaks it holds forever and
    // E(k) <= -(|u|/2) W(k) sinks monotonically below any threshold.
    Envelope rest;
    const double ulead = std::abs(lead->coeff);
    double ratio_peak = 0.0;
    for (const auto& t : terms) {
        if (&t == lead) continue;
        rest.terms.push_back(t);
        if (t.alpha < lead->alpha && t.power > lead->power)
            ratio_peak = std::max(
                ratio_peak, static_cast<double>(t.power - lead->power) / (lead->alpha - t.alpha));
    }
    std::int64_t k = std::max({start - 1, std::int64_t(1),
                               static_cast<std::int64_t>(std::ceil(ratio_peak))});
    EnvTerm w{1.0, lead->power, lead->alpha};
    for (std::int64_t i = 0; i < kScanLimit; ++i, ++k) {
        const double wk = eval_env_term(w, k + 1);
        if (rest.abs_value(k + 1) <= 0.5 * ulead * wk && -0.5 * ulead * wk <= threshold)
            return k;
    }
    return std::nullopt;
}

double Envelope::sup_upper(std::int64_t start, bool* exact) const {
    if (exact) *exact = false;
    if (terms.empty()) {
        if (exact) *exact = true;
        return 0.0;
    }
    const EnvTerm* lead = leading();
    const bool grows = lead->alpha > 0.0 || (lead->alpha == 0.0 && lead->power > 0);
    if (grows && lead->coeff > 0.0) return std::numeric_limits<double>::infinity();

    if (grows) {
        // Sinks to -inf; the sup is attained somewhere in a certified head.
        auto k0 = eventually_below(value(start), start);
        if (!k0) return std::numeric_limits<double>::infinity();
        double m = -std::numeric_limits<double>::infinity();
        for (std::int64_t k = start; k <= std::max(start, *k0); ++k) m = std::max(m, value(k));
        if (exact) *exact = terms.size() == 1;
        return m;
    }

    double c0 = 0.0;
    Envelope decay;
    for (const auto& t : terms) {
        if (t.alpha == 0.0 && t.power == 0)
            c0 += t.coeff;
        else
            decay.terms.push_back(t);
    }
    if (decay.terms.empty()) {
        if (exact) *exact = true;
        return c0;
    }
    const std::int64_t scan_end = std::max(start, decay.decay_peak()) + 64;
    double m = -std::numeric_limits<double>::infinity();
    for (std::int64_t k = start; k <= scan_end; ++k) m = std::max(m, value(k));
    const double beyond = c0 + decay.abs_value(scan_end + 1);
    if (exact) *exact = terms.size() == 1 && m >= beyond;
    return std::max(m, beyond);
}

} // namespace

// ---------------------------------------------------------------------------
// Construction / normalization

TailFormula TailFormula::zero() { return TailFormula{}; }

TailFormula TailFormula::constant(Complex c) { return monomial(c, 0, Complex(0, 0)); }

TailFormula TailFormula::monomial(Complex c, int power, Complex rate) {
    if (power < 0) throw GrammarOverflow("tail formula: negative powers of k are out of grammar");
    TailFormula f;
    f.terms_.push_back(TailTerm{c, power, rate});
    f.normalize();
    return f;
}

TailFormula TailFormula::sum_of(std::vector<TailTerm> terms) {
    TailFormula f;
    f.terms_ = std::move(terms);
    f.normalize();
    return f;
}

TailFormula TailFormula::exp_of(const TailFormula& arg) {
    if (arg.is_exp_)
        throw GrammarOverflow("tail formula: exp of an exp-wrapped tail is out of grammar");
    TailFormula f;
    f.terms_ = arg.terms_;
    f.is_exp_ = true;
    f.normalize();
    return f;
}

void TailFormula::normalize() {
    for (auto& t : terms_) {
        if (t.power < 0) throw GrammarOverflow("tail formula: negative power of k");
        if (t.power > kMaxPower)
            throw GrammarOverflow("tail formula: power of k exceeds grammar cap " +
                                  std::to_string(kMaxPower));
        t.rate = Complex(t.rate.real(), im_mod_2pi(t.rate.imag()));
    }
    std::sort(terms_.begin(), terms_.end(), term_order);
    std::vector<TailTerm> merged;
    for (const auto& t : terms_) {
        if (!merged.empty() && merged.back().power == t.power && merged.back().rate == t.rate)
            merged.back().coeff += t.coeff;
        else
            merged.push_back(t);
    }
    std::erase_if(merged, [](const TailTerm& t) { return t.coeff == Complex(0, 0); });
    terms_ = std::move(merged);

    if (is_exp_) {
        // exp(affine) folds back into a plain term: e^{c0 + c1 k} = e^{c0} e^{c1 k}.
        bool affine = true;
        for (const auto& t : terms_)
            if (t.rate != Complex(0, 0) || t.power > 1) affine = false;
        if (affine) {
            Complex c0(0, 0), c1(0, 0);
            for (const auto& t : terms_) (t.power == 0 ? c0 : c1) += t.coeff;
            terms_.clear();
            is_exp_ = false;
            terms_.push_back(TailTerm{std::exp(c0), 0,
                                      Complex(c1.real(), im_mod_2pi(c1.imag()))});
            std::erase_if(terms_, [](const TailTerm& t) { return t.coeff == Complex(0, 0); });
        }
    }
    if (terms_.size() > static_cast<std::size_t>(kMaxTerms))
        throw GrammarOverflow("tail formula: term count exceeds grammar cap; materialize more prefix blocks");
}

// ---------------------------------------------------------------------------
// Predicates and evaluation

Complex TailFormula::value(std::int64_t k) const {
    Complex sum(0, 0);
    for (const auto& t : terms_) sum += eval_term(t, k);
    return is_exp_ ? std::exp(sum) : sum;
}

bool TailFormula::is_zero() const noexcept { return !is_exp_ && terms_.empty(); }

bool TailFormula::is_constant(Complex* out) const {
    if (is_exp_) {
        if (!terms_.empty()) return false;  // exp(0) = 1
        if (out) *out = Complex(1, 0);
        return true;
    }
    if (terms_.empty()) {
        if (out) *out = Complex(0, 0);
        return true;
    }
    if (terms_.size() == 1 && terms_[0].power == 0 && terms_[0].rate == Complex(0, 0)) {
        if (out) *out = terms_[0].coeff;
        return true;
    }
    return false;
}

bool TailFormula::is_real_valued() const { return equals(conjugated()); }

bool TailFormula::is_unimodular() const {
    if (is_exp_) {
        // |exp(g)| = exp(Re g); unimodular iff Re g vanishes identically.
        TailFormula re = TailFormula(*this);
        re.is_exp_ = false;
        TailFormula half = Complex(0.5, 0) * (re + re.conjugated());
        return half.is_zero();
    }
    if (terms_.size() != 1) return false;
    const TailTerm& t = terms_[0];
    return t.power == 0 && t.rate.real() == 0.0 && std::abs(std::abs(t.coeff) - 1.0) <= 1e-12;
}

// ---------------------------------------------------------------------------
// Algebra

TailFormula TailFormula::conjugated() const {
    TailFormula f;
    f.is_exp_ = is_exp_;
    f.terms_.reserve(terms_.size());
    for (const auto& t : terms_)
        f.terms_.push_back(TailTerm{std::conj(t.coeff), t.power, std::conj(t.rate)});
    f.normalize();
    return f;
}

TailFormula TailFormula::shifted(std::int64_t shift) const {
    // k -> k - shift:  c (k-s)^d e^{a(k-s)} expands binomially over powers of k.
    TailFormula f;
    f.is_exp_ = is_exp_;
    const double s = static_cast<double>(shift);
    for (const auto& t : terms_) {
        const Complex scale = t.coeff * std::exp(t.rate * Complex(-s, 0));
        std::vector<double> binom(t.power + 1, 1.0);
        for (int j = 1; j <= t.power; ++j)
            binom[j] = binom[j - 1] * static_cast<double>(t.power - j + 1) / static_cast<double>(j);
        double spow = 1.0;
        for (int j = t.power; j >= 0; --j) {
            // coefficient of k^j: C(d, j) (-s)^{d-j}
            const double c = binom[j] * ((t.power - j) % 2 == 0 ? spow : -spow);
            f.terms_.push_back(TailTerm{scale * c, j, t.rate});
            spow *= s;
        }
    }
    f.normalize();
    return f;
}

TailFormula TailFormula::operator-() const { return Complex(-1, 0) * *this; }

TailFormula operator+(const TailFormula& a, const TailFormula& b) {
    if (!a.is_exp_ && !b.is_exp_) {
        std::vector<TailTerm> terms = a.terms_;
        terms.insert(terms.end(), b.terms_.begin(), b.terms_.end());
        return TailFormula::sum_of(std::move(terms));
    }
    if (a.is_exp_ && b.is_zero()) return a;
    if (b.is_exp_ && a.is_zero()) return b;
    if (a.is_exp_ && b.is_exp_) {
        // e^g + e^h = e^{h} (e^{g-h} + 1); stays closed when g - h is constant.
        TailFormula g = a, h = b;
        g.is_exp_ = h.is_exp_ = false;
        TailFormula diff = g - h;
        Complex c;
        if (diff.is_constant(&c)) {
            const Complex fold = std::exp(c) + Complex(1, 0);
            if (fold == Complex(0, 0)) return TailFormula::zero();
            return TailFormula::exp_of(h + TailFormula::constant(std::log(fold)));
        }
    }
    throw GrammarOverflow("tail formula: sum with exponential tail is out of grammar; materialize more prefix blocks");
}

TailFormula operator-(const TailFormula& a, const TailFormula& b) { return a + (-b); }

TailFormula operator*(Complex s, const TailFormula& f) {
    if (s == Complex(0, 0)) return TailFormula::zero();
    if (f.is_exp_) {
        TailFormula g = f;
        g.is_exp_ = false;
        return TailFormula::exp_of(g + TailFormula::constant(std::log(s)));
    }
    TailFormula out = f;
    for (auto& t : out.terms_) t.coeff *= s;
    out.normalize();
    return out;
}

TailFormula operator*(const TailFormula& a, const TailFormula& b) {
    if (!a.is_exp_ && !b.is_exp_) {
        std::vector<TailTerm> terms;
        terms.reserve(a.terms_.size() * b.terms_.size());
        for (const auto& ta : a.terms_)
            for (const auto& tb : b.terms_)
                terms.push_back(TailTerm{ta.coeff * tb.coeff, ta.power + tb.power,
                                         ta.rate + tb.rate});
        return TailFormula::sum_of(std::move(terms));
    }
    if (a.is_exp_ && b.is_exp_) {
        TailFormula g = a, h = b;
        g.is_exp_ = h.is_exp_ = false;
        return TailFormula::exp_of(g + h);
    }
    const TailFormula& e = a.is_exp_ ? a : b;
    const TailFormula& p = a.is_exp_ ? b : a;
    if (p.is_zero()) return TailFormula::zero();
    if (p.terms_.size() == 1 && p.terms_[0].power == 0) {
        // c e^{ak} * e^{g} = e^{g + a k + log c}
        TailFormula g = e;
        g.is_exp_ = false;
        TailFormula extra = TailFormula::sum_of(
            {TailTerm{std::log(p.terms_[0].coeff), 0, Complex(0, 0)},
             TailTerm{p.terms_[0].rate, 1, Complex(0, 0)}});
        return TailFormula::exp_of(g + extra);
    }
    throw GrammarOverflow("tail formula: product of polynomial and exponential tails is out of grammar; materialize more prefix blocks");
}

bool TailFormula::equals(const TailFormula& other) const {
    if (is_exp_ != other.is_exp_ || terms_.size() != other.terms_.size()) return false;
    for (std::size_t i = 0; i < terms_.size(); ++i) {
        if (terms_[i].power != other.terms_[i].power || terms_[i].rate != other.terms_[i].rate ||
            terms_[i].coeff != other.terms_[i].coeff)
            return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// Certified |f| analysis

namespace {

// Envelopes of the real part of a term sum (used under the exp wrapper):
// real-rate terms keep their signed real coefficient; oscillating terms are
// replaced by +|c| (upper) or -|c| (lower).
Envelope real_part_envelope(const std::vector<TailTerm>& terms, double osc_sign) {
    Envelope env;
    for (const auto& t : terms) {
        if (t.rate.imag() == 0.0 && t.coeff.imag() == 0.0)
            env.add(t.coeff.real(), t.power, t.rate.real());
        else
            env.add(osc_sign * std::abs(t.coeff), t.power, t.rate.real());
    }
    env.prune();
    return env;
}

// Upper envelope of |f| for a plain term sum: every coefficient to |c|.
Envelope abs_upper_envelope(const std::vector<TailTerm>& terms) {
    Envelope env;
    for (const auto& t : terms) env.add(std::abs(t.coeff), t.power, t.rate.real());
    env.prune();
    return env;
}

// Lower envelope of |f|: a single dominant constant-modulus term minus the
// rest; empty when no usable lower bound exists.
std::optional<Envelope> abs_lower_envelope(const std::vector<TailTerm>& terms) {
    // Find the unique term of maximal (alpha, power) growth; |f| >= |that|
    // minus the envelope of the rest.
    if (terms.empty()) return std::nullopt;
    std::size_t lead = 0;
    for (std::size_t i = 1; i < terms.size(); ++i) {
        const auto &a = terms[i], &b = terms[lead];
        if (a.rate.real() > b.rate.real() ||
            (a.rate.real() == b.rate.real() && a.power > b.power))
            lead = i;
    }
    for (std::size_t i = 0; i < terms.size(); ++i) {
        if (i == lead) continue;
        if (terms[i].rate.real() == terms[lead].rate.real() &&
            terms[i].power == terms[lead].power)
            return std::nullopt;  // tied growth, no single dominant term
    }
    Envelope env;
    env.add(std::abs(terms[lead].coeff), terms[lead].power, terms[lead].rate.real());
    for (std::size_t i = 0; i < terms.size(); ++i)
        if (i != lead) env.add(-std::abs(terms[i].coeff), terms[i].power, terms[i].rate.real());
    env.prune();
    return env;
}

struct GrowthClass {
    double alpha_max = -std::numeric_limits<double>::infinity();
    int power_max = 0;
    bool empty = true;
};

GrowthClass classify(const std::vector<TailTerm>& terms) {
    GrowthClass g;
    for (const auto& t : terms) {
        g.empty = false;
        if (t.rate.real() > g.alpha_max) {
            g.alpha_max = t.rate.real();
            g.power_max = t.power;
        } else if (t.rate.real() == g.alpha_max) {
            g.power_max = std::max(g.power_max, t.power);
        }
    }
    return g;
}

// Mean (Cesàro) coefficient of the dominant growth group: the real part of
// the zero-frequency coefficient.  A positive mean certifies divergence of
// Re g -> +inf along the group.
double dominant_mean(const std::vector<TailTerm>& terms, const GrowthClass& g) {
    double mean = 0.0;
    for (const auto& t : terms)
        if (t.rate.real() == g.alpha_max && t.power == g.power_max && t.rate.imag() == 0.0)
            mean += t.coeff.real();
    return mean;
}

} // namespace

TailFormula::AbsProfile TailFormula::abs_profile(std::int64_t start) const {
    AbsProfile p;
    if (is_exp_) {
        // |exp(g)| = exp(Re g).
        TailFormula g = *this;
        g.is_exp_ = false;
        TailFormula re = Complex(0.5, 0) * (g + g.conjugated());
        if (re.is_zero()) {
            p.bounded = true;
            p.sup_upper = 1.0;
            p.sup_exact = true;
            return p;
        }
        Envelope upper = real_part_envelope(re.terms(), +1.0);
        bool sup_exact = false;
        const double sup_h = upper.sup_upper(start, &sup_exact);
        if (std::isinf(sup_h)) {
            const GrowthClass gc = classify(re.terms());
            if (dominant_mean(re.terms(), gc) > 0.0) {
                p.bounded = false;
                return p;
            }
            throw GrammarOverflow(
                "tail formula: boundedness of an exponential tail with oscillating exponent is undecided; materialize more prefix blocks");
        }
        p.bounded = true;
        p.sup_upper = std::exp(sup_h);
        p.sup_exact = sup_exact && re.terms().size() == 1 && re.terms()[0].rate.imag() == 0.0;
        // exp(h) -> 0 exactly when h -> -inf, i.e. the upper envelope sinks.
        const EnvTerm* lead = upper.leading();
        p.decays_to_zero =
            lead && lead->coeff < 0.0 && (lead->alpha > 0.0 || (lead->alpha == 0.0 && lead->power > 0));
        return p;
    }

    if (terms_.empty()) {
        p.bounded = true;
        p.decays_to_zero = true;
        p.sup_upper = 0.0;
        p.sup_exact = true;
        return p;
    }

    const GrowthClass g = classify(terms_);
    if (g.alpha_max > 0.0 || (g.alpha_max == 0.0 && g.power_max > 0)) {
        p.bounded = false;  // dominant group oscillation has positive limsup
        return p;
    }
    p.bounded = true;
    p.decays_to_zero = g.alpha_max < 0.0;

    double c_osc = 0.0;  // bound for the non-decaying (constant-modulus) part
    Envelope decay;
    for (const auto& t : terms_) {
        if (t.rate.real() == 0.0)
            c_osc += std::abs(t.coeff);
        else
            decay.add(std::abs(t.coeff), t.power, t.rate.real());
    }
    decay.prune();
    const std::int64_t scan_end = std::max(start, decay.decay_peak()) + 64;
    double m = 0.0;
    for (std::int64_t k = start; k <= scan_end; ++k) m = std::max(m, std::abs(value(k)));
    const double beyond = c_osc + decay.abs_value(scan_end + 1);
    p.sup_upper = std::max(m, beyond);
    p.sup_exact = terms_.size() == 1 && m >= beyond;
    return p;
}

TailFormula::ExceedSplit TailFormula::exceed_split(double threshold, std::int64_t start) const {
    ExceedSplit out;
    if (is_exp_) {
        // e^{h} > threshold <=> h > log threshold (h = Re g); always true for
        // threshold <= 0 since the exponential never vanishes.
        if (threshold <= 0.0) {
            out.scan_end = start - 1;
            out.rest_all = true;
            return out;
        }
        TailFormula g = *this;
        g.is_exp_ = false;
        TailFormula re = Complex(0.5, 0) * (g + g.conjugated());
        const double lt = std::log(threshold);
        Envelope upper = real_part_envelope(re.terms(), +1.0);
        Envelope lower = real_part_envelope(re.terms(), -1.0);
        if (auto k0 = upper.eventually_below(lt, start)) {
            out.scan_end = std::max(start - 1, *k0);
            out.rest_all = false;
        } else {
            Envelope neg_lower;
            for (const auto& t : lower.terms) neg_lower.add(-t.coeff, t.power, t.alpha);
            if (auto k1 = neg_lower.eventually_below(-std::nextafter(lt, 1e300), start)) {
                out.scan_end = std::max(start - 1, *k1);
                out.rest_all = true;
            } else {
                throw GrammarOverflow(
                    "tail formula: threshold crossing of exponential tail is undecided; materialize more prefix blocks");
            }
        }
        for (std::int64_t k = start; k <= out.scan_end; ++k)
            if (std::abs(value(k)) > threshold) out.exceeding.push_back(k);
        return out;
    }

    if (terms_.empty()) {
        out.scan_end = start - 1;
        out.rest_all = threshold < 0.0;
        return out;
    }

    // Single growing term: |f(k)| = |c| k^d e^{Re(a) k} is non-decreasing on
    // k >= 0, so the crossing index is found by doubling + bisection instead
    // of an index-by-index scan (the crossing can sit billions of blocks out
    // when the coefficient is tiny).
    if (terms_.size() == 1) {
        const auto& t = terms_.front();
        const double beta = t.rate.real();
        if (std::abs(t.coeff) == 0.0) {
            out.scan_end = start - 1;
            out.rest_all = threshold < 0.0;
            return out;
        }
        if (beta > 0.0 || (beta == 0.0 && t.power > 0)) {
            auto above = [&](std::int64_t k) { return std::abs(value(k)) > threshold; };
            std::int64_t lo = start;  // invariant: everything below lo is <= threshold
            if (above(lo)) {
                out.scan_end = start - 1;
                out.rest_all = true;
                return out;
            }
            std::int64_t hi = std::max<std::int64_t>(2 * lo, 2);
            while (!above(hi)) {
                lo = hi;
                if (hi > (std::int64_t(1) << 60))
                    throw GrammarOverflow(
                        "tail formula: threshold crossing beyond representable block indices");
                hi *= 2;
            }
            while (lo + 1 < hi) {
                const std::int64_t mid = lo + (hi - lo) / 2;
                (above(mid) ? hi : lo) = mid;
            }
            out.scan_end = hi - 1;  // all of [start, hi) verified or certified below
            out.rest_all = true;
            return out;
        }
    }

    Envelope upper = abs_upper_envelope(terms_);
    if (auto k0 = upper.eventually_below(threshold, start)) {
        out.scan_end = std::max(start - 1, *k0);
        out.rest_all = false;
    } else if (auto low = abs_lower_envelope(terms_)) {
        Envelope neg;
        for (const auto& t : low->terms) neg.add(-t.coeff, t.power, t.alpha);
        if (auto k1 = neg.eventually_below(-std::nextafter(threshold, 1e300), start)) {
            out.scan_end = std::max(start - 1, *k1);
            out.rest_all = true;
        } else {
            throw GrammarOverflow(
                "tail formula: threshold crossing is undecided; materialize more prefix blocks");
        }
    } else {
        throw GrammarOverflow(
            "tail formula: threshold crossing is undecided (tied oscillating growth); materialize more prefix blocks");
    }
    for (std::int64_t k = start; k <= out.scan_end; ++k)
        if (std::abs(value(k)) > threshold) out.exceeding.push_back(k);
    return out;
}

// ---------------------------------------------------------------------------

Complex geometric_power_sum(Complex z, int power, std::int64_t start) {
    if (power < 0 || power > TailFormula::kMaxPower)
        throw GrammarOverflow("geometric_power_sum: power out of range");
    if (std::abs(z) >= 1.0)
        throw DivergentTail("geometric_power_sum: |z| >= 1, series diverges");
    if (z == Complex(0, 0)) return start == 0 && power == 0 ? Complex(1, 0) : Complex(0, 0);

    // Stirling numbers of the second kind, S(n, k), up to the power cap.
    static const auto stirling = [] {
        constexpr int n = TailFormula::kMaxPower + 1;
        std::array<std::array<double, n>, n> s{};
        s[0][0] = 1.0;
        for (int i = 1; i < n; ++i)
            for (int j = 1; j <= i; ++j)
                s[i][j] = j * s[i - 1][j] + s[i - 1][j - 1];
        return s;
    }();

    // Full series sum_{k>=0} k^d z^k = sum_i S(d,i) i! z^i / (1-z)^{i+1}.
    const Complex one(1, 0);
    Complex full(0, 0);
    if (power == 0) {
        full = one / (one - z);
    } else {
        double fact = 1.0;
        Complex zp = one;
        Complex denom = one - z;
        Complex denom_pow = denom;  // (1-z)^{i+1}
        for (int i = 1; i <= power; ++i) {
            fact *= i;
            zp *= z;
            denom_pow *= denom;
            full += stirling[power][i] * fact * zp / denom_pow;
        }
    }
    // Subtract the explicit head below `start`.
    Complex head(0, 0);
    Complex zk = one;
    for (std::int64_t k = 0; k < start; ++k) {
        if (k > 0) zk *= z;
        const double kd = power == 0 ? 1.0 : std::pow(static_cast<double>(k), power);
        if (k == 0 && power > 0) continue;
        head += kd * zk;
    }
    return full - head;
}

} // namespace mvnlab
