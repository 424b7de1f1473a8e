#include "mvnlab/topologies.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "mvnlab/parallel.hpp"

namespace mvnlab {

using linops::CMatrix;
using linops::CVector;

namespace {

constexpr double kPi = 3.14159265358979323846;

void require_same_algebra(const BlockOperator& a, const BlockOperator& b, const char* who) {
    if (!(*a.algebra() == *b.algebra()))
        throw AlgebraMismatch(std::string(who) + ": operands live over different algebras");
}

// (x - i)^{-1} for real x.
Complex scalar_resolvent(double x) { return 1.0 / Complex(x, -1.0); }

// || (Re-part resolvent difference) e1 || for one matrix block pair.
double resolvent_diff_on_e1(const CMatrix& x, const CMatrix& y) {
    const Eigen::Index n = x.rows();
    CVector e1 = CVector::Zero(n);
    e1(0) = Complex(1, 0);
    const CMatrix shift = Complex(0, -1) * CMatrix::Identity(n, n);
    CVector rx = (x + shift).partialPivLu().solve(e1);
    CVector ry = (y + shift).partialPivLu().solve(e1);
    return (rx - ry).norm();
}

// Smallest K with 4 * 2^{-(K+1)} <= tol: past K the per-block terms (each
// resolvent / exponential difference is at most 2 per part) sum below tol.
std::int64_t block_cutoff(double tol, std::int64_t at_least) {
    std::int64_t k = std::max<std::int64_t>(at_least, 0);
    while (std::pow(0.5, static_cast<double>(k)) * 2.0 > tol && k < 4096) ++k;
    return k;
}

} // namespace

MetricValue srt_dist(const BlockOperator& a, const BlockOperator& b, double trunc_tol) {
    require_same_algebra(a, b, "srt_dist");
    const auto& alg = *a.algebra();
    const std::int64_t k_pref = std::max(a.prefix_count(), b.prefix_count());

    MetricValue out;
    for (std::int64_t k = 0; k < k_pref; ++k) {
        const CMatrix ak = a.block(k), bk = b.block(k);
        if (ak == bk) continue;
        const auto ra = linops::re_im_split(ak);
        const auto rb = linops::re_im_split(bk);
        const double w = SeparatingFamily::weight(k);
        out.value += w * (resolvent_diff_on_e1(ra.re, rb.re) + resolvent_diff_on_e1(ra.im, rb.im));
    }

    if (!alg.has_tail() || a.tail().equals(b.tail())) return out;

    const std::int64_t k_end = block_cutoff(trunc_tol, k_pref);
    for (std::int64_t k = k_pref; k <= k_end; ++k) {
        const Complex fa = a.tail().value(k), fb = b.tail().value(k);
        if (fa == fb) continue;
        const double w = SeparatingFamily::weight(k);
        out.value += w * (std::abs(scalar_resolvent(fa.real()) - scalar_resolvent(fb.real())) +
                          std::abs(scalar_resolvent(fa.imag()) - scalar_resolvent(fb.imag())));
    }
    // Every remaining term is at most 2 + 2 (resolvents are contractions).
    out.bound = 4.0 * std::pow(0.5, static_cast<double>(k_end + 2)) / 0.5;
    return out;
}

namespace {

// sup_{|t|<=m} |e^{i t d} - 1| for real d, exact.
double scalar_exp_sup(double d, int m) {
    const double half = 0.5 * std::abs(d) * m;
    return half >= 0.5 * kPi ? 2.0 : 2.0 * std::sin(half);
}

// sum_{m > m_max} 2^{-m} * min(2, m * cap_rate): certified horizon cutoff.
double horizon_tail_bound(int m_max, double cap_rate) {
    const double pow_m = std::pow(0.5, static_cast<double>(m_max));
    const double via_two = 2.0 * pow_m;
    const double via_rate = cap_rate * (m_max + 2) * pow_m;  // sum m 2^{-m} from m_max+1
    return std::min(via_two, via_rate);
}

struct PartContribution {
    double value = 0.0;
    double bound = 0.0;
};

// One Hermitian pair (X, Y) against xi = e1, all horizons m = 1..m_max.
PartContribution exp_part_matrix(const CMatrix& x, const CMatrix& y, const SetParams& p) {
    PartContribution c;
    const Eigen::Index n = x.rows();
    const double d_op = linops::op_norm(x - y);
    if (d_op == 0.0) return c;

    if (n == 1) {
        const double d = x(0, 0).real() - y(0, 0).real();
        for (int m = 1; m <= p.m_max; ++m)
            c.value += std::pow(0.5, m) * scalar_exp_sup(d, m);
        c.bound += horizon_tail_bound(p.m_max, std::abs(d));
        return c;
    }

    Eigen::SelfAdjointEigenSolver<CMatrix> ex(x), ey(y);
    CVector e1 = CVector::Zero(n);
    e1(0) = Complex(1, 0);
    const CVector vx = ex.eigenvectors().adjoint() * e1;
    const CVector vy = ey.eigenvectors().adjoint() * e1;
    // Lipschitz rate of t -> ||(e^{itX} - e^{itY}) e1|| (exp and generator commute).
    const double lip = (x * e1).norm() + (y * e1).norm();

    const int cells = static_cast<int>(std::ceil(p.m_max / p.t_step));
    const double step = static_cast<double>(p.m_max) / cells;
    std::vector<double> g(2 * cells + 1);
    CVector px(n), py(n);
    for (int i = -cells; i <= cells; ++i) {
        const double t = step * i;
        for (Eigen::Index j = 0; j < n; ++j) {
            px(j) = std::polar(1.0, t * ex.eigenvalues()(j)) * vx(j);
            py(j) = std::polar(1.0, t * ey.eigenvalues()(j)) * vy(j);
        }
        g[static_cast<std::size_t>(i + cells)] =
            (ex.eigenvectors() * px - ey.eigenvectors() * py).norm();
    }
    double running = 0.0;
    int radius = 0;
    for (int m = 1; m <= p.m_max; ++m) {
        const int target = static_cast<int>(std::round(static_cast<double>(m) / step));
        for (; radius <= std::min(target, cells); ++radius) {
            running = std::max(running, g[static_cast<std::size_t>(cells + radius)]);
            running = std::max(running, g[static_cast<std::size_t>(cells - radius)]);
        }
        const double cap = std::min(2.0, m * d_op);
        const double value_m = std::min(running, cap);
        const double sup_upper = std::min(cap, running + 0.5 * step * lip);
        c.value += std::pow(0.5, m) * value_m;
        c.bound += std::pow(0.5, m) * (sup_upper - value_m);
    }
    c.bound += horizon_tail_bound(p.m_max, d_op);
    return c;
}

PartContribution exp_part_scalar(double dx, int m_max) {
    PartContribution c;
    for (int m = 1; m <= m_max; ++m) c.value += std::pow(0.5, m) * scalar_exp_sup(dx, m);
    c.bound += horizon_tail_bound(m_max, std::abs(dx));
    return c;
}

} // namespace

MetricValue set_dist(const BlockOperator& a, const BlockOperator& b, const SetParams& p) {
    require_same_algebra(a, b, "set_dist");
    const auto& alg = *a.algebra();
    const std::int64_t k_pref = std::max(a.prefix_count(), b.prefix_count());

    MetricValue out;
    for (std::int64_t k = 0; k < k_pref; ++k) {
        const CMatrix ak = a.block(k), bk = b.block(k);
        if (ak == bk) continue;
        const auto ra = linops::re_im_split(ak);
        const auto rb = linops::re_im_split(bk);
        const double w = SeparatingFamily::weight(k);
        const auto re = exp_part_matrix(ra.re, rb.re, p);
        const auto im = exp_part_matrix(ra.im, rb.im, p);
        out.value += w * (re.value + im.value);
        out.bound += w * (re.bound + im.bound);
    }

    if (!alg.has_tail() || a.tail().equals(b.tail())) return out;

    const std::int64_t k_end = block_cutoff(p.trunc_tol, k_pref);
    for (std::int64_t k = k_pref; k <= k_end; ++k) {
        const Complex fa = a.tail().value(k), fb = b.tail().value(k);
        if (fa == fb) continue;
        const double w = SeparatingFamily::weight(k);
        const auto re = exp_part_scalar(fa.real() - fb.real(), p.m_max);
        const auto im = exp_part_scalar(fa.imag() - fb.imag(), p.m_max);
        out.value += w * (re.value + im.value);
        out.bound += w * (re.bound + im.bound);
    }
    out.bound += 4.0 * std::pow(0.5, static_cast<double>(k_end + 1));
    return out;
}

namespace {

// tau(E_{|X|}((eps, inf))): singular-value counts on the prefix, certified
// threshold split on the tail.
class SpectralMass {
public:
    explicit SpectralMass(const BlockOperator& x) : x_(x) {
        const auto& alg = *x.algebra();
        prefix_sv_.reserve(static_cast<std::size_t>(x.prefix_count()));
        for (std::int64_t k = 0; k < x.prefix_count(); ++k) {
            Eigen::JacobiSVD<CMatrix> svd(x.prefix()[static_cast<std::size_t>(k)]);
            std::vector<double> sv(svd.singularValues().data(),
                                   svd.singularValues().data() + svd.singularValues().size());
            std::sort(sv.begin(), sv.end());
            prefix_sv_.push_back(std::move(sv));
        }
        tail_active_ = alg.has_tail() && !x.tail().is_zero();
    }

    double mass_above(double eps) const {
        const auto& alg = *x_.algebra();
        double mass = 0.0;
        for (std::int64_t k = 0; k < x_.prefix_count(); ++k) {
            const auto& sv = prefix_sv_[static_cast<std::size_t>(k)];
            const auto over = sv.end() - std::upper_bound(sv.begin(), sv.end(), eps);
            mass += alg.weight(k) * static_cast<double>(over) / static_cast<double>(sv.size());
        }
        if (tail_active_) {
            const auto split = x_.tail().exceed_split(eps, x_.prefix_count());
            for (std::int64_t k : split.exceeding) mass += alg.weight(k);
            if (split.rest_all) mass += alg.weight_mass_from(split.scan_end + 1);
        }
        return mass;
    }

private:
    const BlockOperator& x_;
    std::vector<std::vector<double>> prefix_sv_;
    bool tail_active_ = false;
};

} // namespace

double measure_dist(const BlockOperator& a, const BlockOperator& b) {
    require_same_algebra(a, b, "measure_dist");
    const BlockOperator x = a - b;
    bool all_zero = x.tail().is_zero();
    for (const auto& m : x.prefix())
        if (m.squaredNorm() != 0.0) all_zero = false;
    if (all_zero) return 0.0;

    const SpectralMass mass(x);
    // rho <= 1 always: the spectral mass never exceeds the total trace 1.
    double lo = 0.0, hi = 1.0;
    while (hi - lo > kMeasureTol) {
        const double mid = 0.5 * (lo + hi);
        if (mass.mass_above(mid) <= mid)
            hi = mid;
        else
            lo = mid;
    }
    return hi;
}

MetricValue sot_dist(const BlockOperator& x, const BlockOperator& y, double trunc_tol) {
    require_same_algebra(x, y, "sot_dist");
    const double sx = sup_norm(x), sy = sup_norm(y);
    if (!std::isfinite(sx) || !std::isfinite(sy))
        throw Unbounded("sot_dist: operands must be bounded");
    const std::int64_t k_pref = std::max(x.prefix_count(), y.prefix_count());

    MetricValue out;
    for (std::int64_t k = 0; k < k_pref; ++k) {
        const CMatrix xk = x.block(k), yk = y.block(k);
        if (xk == yk) continue;
        out.value += SeparatingFamily::weight(k) * (xk.col(0) - yk.col(0)).norm();
    }
    if (!x.algebra()->has_tail() || x.tail().equals(y.tail())) return out;

    const TailFormula diff = x.tail() - y.tail();
    const double sup_diff = diff.abs_profile(k_pref).sup_upper;
    std::int64_t k_end = k_pref;
    while (std::pow(0.5, static_cast<double>(k_end + 1)) * sup_diff > trunc_tol && k_end < 4096)
        ++k_end;
    for (std::int64_t k = k_pref; k <= k_end; ++k)
        out.value += SeparatingFamily::weight(k) * std::abs(diff.value(k));
    out.bound = std::pow(0.5, static_cast<double>(k_end + 1)) * sup_diff;
    return out;
}

double atomic_seminorm(const BlockOperator& x, std::int64_t k) {
    if (k < x.prefix_count()) return linops::op_norm(x.block(k));
    x.algebra()->block_dim(k);
    return std::abs(x.tail().value(k));
}

ConvergenceReport convergence_report(const std::vector<BlockOperator>& seq,
                                     const BlockOperator& limit, double threshold,
                                     const SetParams& set_params) {
    ConvergenceReport report;
    report.threshold = threshold;
    report.rows.resize(seq.size());
    const bool limit_bounded = bounded_part_membership(limit);

    parallel_for(static_cast<std::int64_t>(seq.size()), [&](std::int64_t i) {
        const auto& a = seq[static_cast<std::size_t>(i)];
        ConvergenceRow row;
        row.index = static_cast<int>(i);
        row.srt = srt_dist(a, limit);
        row.set = set_dist(a, limit, set_params);
        row.measure = measure_dist(a, limit);
        if (limit_bounded && bounded_part_membership(a)) {
            row.sot = sot_dist(a, limit);
            row.sot_defined = true;
        }
        report.rows[static_cast<std::size_t>(i)] = std::move(row);
    });

    const std::size_t n = report.rows.size();
    if (n == 0) return report;
    const std::size_t q = std::max<std::size_t>(1, n / 4);
    report.srt_converges = report.set_converges = report.measure_converges =
        report.sot_converges = true;
    for (std::size_t i = n - q; i < n; ++i) {
        const auto& r = report.rows[i];
        if (r.srt.value + r.srt.bound > threshold) report.srt_converges = false;
        if (r.set.value + r.set.bound > threshold) report.set_converges = false;
        if (r.measure + kMeasureTol > threshold) report.measure_converges = false;
        if (!r.sot_defined || r.sot.value + r.sot.bound > threshold)
            report.sot_converges = false;
    }
    return report;
}

} // namespace mvnlab
