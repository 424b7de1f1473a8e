#pragma once

#include <complex>
#include <functional>
#include <utility>

#include <Eigen/Dense>

#include "mvnlab/errors.hpp"

// Dense complex kernel: spectral decomposition of Hermitian matrices and the
// functional-calculus helpers everything upstream is phrased in.  All maps
// here act on a single matrix block; direct-sum plumbing lives elsewhere.

namespace mvnlab::linops {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

// Relative Frobenius tolerance for accepting a matrix as (skew-)Hermitian.
inline constexpr double kHermitianTol = 1e-10;
// Skew detection threshold used to pick the spectral branch of matrix_exp.
inline constexpr double kSkewBranchTol = 1e-12;
// How far from unitary an input may be before log/cayley_inverse refuse it.
inline constexpr double kUnitaryTol = 1e-9;
// Spectrum-hits-1 guard for the inverse Cayley transform.
inline constexpr double kCayleyObstructionTol = 1e-8;

struct SpectralDecomp {
    RVector eigenvalues;  // ascending
    CMatrix basis;        // columns are orthonormal eigenvectors
};

double frobenius(const CMatrix& a);
// Largest singular value.
double op_norm(const CMatrix& a);

bool is_hermitian(const CMatrix& a, double rel_tol = kHermitianTol);
bool is_skew_hermitian(const CMatrix& a, double rel_tol = kSkewBranchTol);
bool is_unitary(const CMatrix& a, double tol = kUnitaryTol);

// Eigensystem of a Hermitian matrix; throws NotHermitian otherwise.
SpectralDecomp hermitian_eig(const CMatrix& a);

// f(A) = U diag(f(lambda)) U* for Hermitian A.
CMatrix func_calc(const std::function<Complex(double)>& f, const CMatrix& a);

// exp(A).  Skew-Hermitian inputs go through spectral phases of -iA (keeps the
// result unitary to roundoff); everything else takes scaling-and-squaring.
CMatrix matrix_exp(const CMatrix& a);

// Principal logarithm of a unitary: skew-Hermitian, eigenphases in (-pi, pi],
// with the branch pinned so that eigenvalue -1 maps to phase +pi.
CMatrix matrix_log_unitary(const CMatrix& u);

// A = u * p with p = (A*A)^{1/2} positive semidefinite and u unitary (full
// SVD extends the phase over the kernel).
struct PolarDecomp {
    CMatrix isometry;
    CMatrix positive;
};
PolarDecomp polar_decompose(const CMatrix& a);

// u = (T - i)(T + i)^{-1} for Hermitian T; always unitary, never has 1 in its
// spectrum (that point is the image of infinity).
CMatrix cayley(const CMatrix& t);

// T = i(1 + u)(1 - u)^{-1}; throws SpectralObstruction if u has an eigenvalue
// within kCayleyObstructionTol of 1.
CMatrix cayley_inverse(const CMatrix& u);

// A = re + i*im with both parts Hermitian.
struct ReImParts {
    CMatrix re;
    CMatrix im;
};
ReImParts re_im_split(const CMatrix& a);

// Kronecker product, row-major convention: (a ⊗ b)[(i1*rb+i2),(j1*cb+j2)] = a(i1,j1)*b(i2,j2).
CMatrix kron(const CMatrix& a, const CMatrix& b);

} // namespace mvnlab::linops
