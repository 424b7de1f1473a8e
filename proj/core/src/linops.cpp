#include "mvnlab/linops.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <unsupported/Eigen/MatrixFunctions>

namespace mvnlab::linops {

namespace {

void require_square(const CMatrix& a, const char* who) {
    if (a.rows() != a.cols() || a.rows() == 0)
        throw DimensionMismatch(std::string(who) + ": matrix must be square and non-empty, got " +
                                std::to_string(a.rows()) + "x" + std::to_string(a.cols()));
    if (!a.allFinite())
        throw DimensionMismatch(std::string(who) + ": matrix has non-finite entries");
}

} // namespace

double frobenius(const CMatrix& a) { return a.norm(); }

double op_norm(const CMatrix& a) {
    if (a.size() == 0) return 0.0;
    Eigen::JacobiSVD<CMatrix> svd(a);
    return svd.singularValues()(0);
}

bool is_hermitian(const CMatrix& a, double rel_tol) {
    return (a - a.adjoint()).norm() <= rel_tol * (1.0 + a.norm());
}

bool is_skew_hermitian(const CMatrix& a, double rel_tol) {
    return (a + a.adjoint()).norm() <= rel_tol * (1.0 + a.norm());
}

bool is_unitary(const CMatrix& a, double tol) {
    CMatrix gram = a.adjoint() * a;
    gram -= CMatrix::Identity(a.rows(), a.cols());
    return gram.norm() <= tol * static_cast<double>(a.rows());
}

SpectralDecomp hermitian_eig(const CMatrix& a) {
    require_square(a, "hermitian_eig");
    if (!is_hermitian(a))
        throw NotHermitian("hermitian_eig: ||A - A*|| exceeds " + std::to_string(kHermitianTol) +
                           " * (1 + ||A||)");
    // Average away the sub-tolerance asymmetry so the solver sees an exactly
    // self-adjoint input.
    CMatrix sym = 0.5 * (a + a.adjoint());
    Eigen::SelfAdjointEigenSolver<CMatrix> es(sym);
    if (es.info() != Eigen::Success)
        throw NotHermitian("hermitian_eig: eigensolver failed to converge");
    return SpectralDecomp{es.eigenvalues(), es.eigenvectors()};
}

CMatrix func_calc(const std::function<Complex(double)>& f, const CMatrix& a) {
    SpectralDecomp sd = hermitian_eig(a);
    CVector fd(sd.eigenvalues.size());
    for (Eigen::Index i = 0; i < fd.size(); ++i) fd(i) = f(sd.eigenvalues(i));
    return sd.basis * fd.asDiagonal() * sd.basis.adjoint();
}

CMatrix matrix_exp(const CMatrix& a) {
    require_square(a, "matrix_exp");
    if (is_skew_hermitian(a)) {
        // A = iH, H Hermitian: exp(A) = U diag(e^{i lambda}) U*.
        CMatrix h = Complex(0, -1) * a;
        h = 0.5 * (h + h.adjoint());
        Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
        if (es.info() != Eigen::Success)
            throw NotHermitian("matrix_exp: eigensolver failed on skew-Hermitian branch");
        CVector phases(es.eigenvalues().size());
        for (Eigen::Index i = 0; i < phases.size(); ++i)
            phases(i) = std::polar(1.0, es.eigenvalues()(i));
        return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
    }
    return a.exp();  // scaling-and-squaring Pade
}

CMatrix matrix_log_unitary(const CMatrix& u) {
    require_square(u, "matrix_log_unitary");
    if (!is_unitary(u))
        throw NotUnitary("matrix_log_unitary: input is not unitary within " +
                         std::to_string(kUnitaryTol));
    // A unitary is normal, so its Schur form is diagonal and the Schur basis
    // orthonormal; log is the diagonal of eigenphases pulled back.
    Eigen::ComplexSchur<CMatrix> schur(u);
    if (schur.info() != Eigen::Success)
        throw NotUnitary("matrix_log_unitary: Schur decomposition failed");
    const CMatrix& q = schur.matrixU();
    CVector phases(u.rows());
    constexpr double pi = 3.14159265358979323846;
    for (Eigen::Index i = 0; i < phases.size(); ++i) {
        double theta = std::arg(schur.matrixT()(i, i));
        // Branch cut convention: the point -1 takes phase +pi.  Roundoff can
        // land an exact -1 a hair below the cut; fold it back up.
        if (theta <= -pi + 1e-14) theta += 2.0 * pi;
        phases(i) = Complex(0.0, theta);
    }
    CMatrix log = q * phases.asDiagonal() * q.adjoint();
    return 0.5 * (log - log.adjoint());  // exact skew-Hermitian representative
}

PolarDecomp polar_decompose(const CMatrix& a) {
    require_square(a, "polar_decompose");
    Eigen::JacobiSVD<CMatrix> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
    CMatrix u = svd.matrixU() * svd.matrixV().adjoint();
    CMatrix p = svd.matrixV() * svd.singularValues().asDiagonal().toDenseMatrix().cast<Complex>() *
                svd.matrixV().adjoint();
    p = 0.5 * (p + p.adjoint());
    return PolarDecomp{std::move(u), std::move(p)};
}

CMatrix cayley(const CMatrix& t) {
    require_square(t, "cayley");
    if (!is_hermitian(t))
        throw NotHermitian("cayley: input must be Hermitian");
    const Eigen::Index n = t.rows();
    const CMatrix id = CMatrix::Identity(n, n);
    const Complex i(0.0, 1.0);
    // (T + i) is invertible for Hermitian T: spectrum stays off the real axis.
    return (t - i * id) * (t + i * id).partialPivLu().solve(id);
}

CMatrix cayley_inverse(const CMatrix& u) {
    require_square(u, "cayley_inverse");
    if (!is_unitary(u))
        throw NotUnitary("cayley_inverse: input is not unitary within " +
                         std::to_string(kUnitaryTol));
    Eigen::ComplexSchur<CMatrix> schur(u, /*computeU=*/false);
    if (schur.info() != Eigen::Success)
        throw NotUnitary("cayley_inverse: Schur decomposition failed");
    for (Eigen::Index i = 0; i < u.rows(); ++i) {
        if (std::abs(schur.matrixT()(i, i) - Complex(1.0, 0.0)) <= kCayleyObstructionTol)
            throw SpectralObstruction(
                "cayley_inverse: eigenvalue within " + std::to_string(kCayleyObstructionTol) +
                " of 1; the inverse Cayley image is unbounded there");
    }
    const Eigen::Index n = u.rows();
    const CMatrix id = CMatrix::Identity(n, n);
    const Complex i(0.0, 1.0);
    CMatrix t = i * (id + u) * (id - u).partialPivLu().solve(id);
    return 0.5 * (t + t.adjoint());
}

ReImParts re_im_split(const CMatrix& a) {
    require_square(a, "re_im_split");
    const Complex half_over_i(0.0, -0.5);
    CMatrix re = 0.5 * (a + a.adjoint());
    CMatrix im = half_over_i * (a - a.adjoint());
    return ReImParts{std::move(re), std::move(im)};
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
    CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

} // namespace mvnlab::linops
