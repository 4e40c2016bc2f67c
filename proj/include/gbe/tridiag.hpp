#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "gbe/jacobi.hpp"

namespace gbe::eig {

using jacobi::JacobiMatrix;
using cplx = std::complex<double>;

// Eigenvalues (strictly increasing) with squared first eigenvector
// components q_j^2 (positive, summing to 1).
struct SpectralDecomposition {
    std::vector<double> eigenvalues;
    std::vector<double> weights;
};

// Scaled value mantissa * 2^exponent; keeps determinants and transfer
// solutions representable far beyond double range.
struct ScaledComplex {
    cplx mantissa{0.0, 0.0};
    long exponent = 0;

    cplx value() const;      // may overflow/underflow to inf/0 by design
    double log_abs() const;  // log |mantissa * 2^exponent|
};

// Number of eigenvalues strictly below x, by the Sturm ratio recursion
// d_k = (a_k - x) - b_{k-1}^2 / d_{k-1} with LAPACK-style pivot protection
// (|d| < pivmin is replaced by -pivmin). Exact whenever x is not an
// eigenvalue of the matrix or of a leading principal submatrix hitting the
// pivot guard.
std::size_t sturm_count(const JacobiMatrix& J, double x);

// All n eigenvalues, each within tol of a true eigenvalue, strictly
// increasing. Bisection from Gershgorin bounds plus a few Newton polish
// steps on the characteristic-polynomial log derivative.
// tol <= 0 selects the default 1e-12 * max(1, Gershgorin radius).
std::vector<double> eigenvalues(const JacobiMatrix& J, double tol = 0.0);

// Eigenvalues lying in [lo, hi], same accuracy contract as eigenvalues().
// Cost scales with the number of eigenvalues found, not with n, so wide
// matrices can be probed in a narrow energy window.
std::vector<double> eigenvalues_in_interval(const JacobiMatrix& J, double lo, double hi,
                                            double tol = 0.0);

// Squared first components q_j^2 = 1 / sum_k p_k(lambda_j)^2 where p_k are
// the orthonormal polynomials of the three-term recursion. lambda_err is the
// absolute accuracy of the supplied eigenvalues (<= 0 selects the
// eigenvalues() default); it drives the noise floor below which the
// recursion tail is truncated. Throws precision_error when eigenvalues are
// (numerically) degenerate or the weights fail to sum to 1 within 1e-8.
std::vector<double> spectral_weights(const JacobiMatrix& J, const std::vector<double>& eigs,
                                     double lambda_err = 0.0);

SpectralDecomposition decompose(const JacobiMatrix& J, double tol = 0.0);

// det(z I - J) by the three-term recursion, in mantissa/exponent form.
ScaledComplex char_poly(const JacobiMatrix& J, cplx z);

// Entry (x, y) of (J - z)^{-1}, Im z > 0, 1-based indices. Uses the two
// transfer solutions and their Wronskian with power-of-two rescaling.
cplx green_entry(const JacobiMatrix& J, cplx z, std::size_t x, std::size_t y);

// All diagonal resolvent entries (J - z)^{-1}(x, x) in one O(n) pass.
std::vector<cplx> resolvent_diagonal(const JacobiMatrix& J, cplx z);

// First resolvent row (J - z)^{-1}(1, x) for x = 1..n in one O(n) pass,
// returned as scaled values since entries decay below double range.
std::vector<ScaledComplex> resolvent_first_row(const JacobiMatrix& J, cplx z);

// Trace of (J - z)^{-1} via the characteristic-polynomial log derivative.
cplx resolvent_trace(const JacobiMatrix& J, cplx z);

// m-function (J - z)^{-1}(1,1) by the backward continued fraction
// m_k = 1 / (a_k - z - b_k^2 m_{k+1}).
cplx m_function(const JacobiMatrix& J, cplx z);

// Test oracle: eigenvalues by cyclic Jacobi rotations on the dense matrix.
// Limited to n <= 16.
std::vector<double> dense_eig_oracle(const JacobiMatrix& J);

// Test oracle: eigenvalues plus squared first eigenvector components from
// the same dense rotation sweep. Limited to n <= 16.
SpectralDecomposition dense_spectral_oracle(const JacobiMatrix& J);

} // namespace gbe::eig
