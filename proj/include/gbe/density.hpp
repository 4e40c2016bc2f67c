#pragma once

#include <complex>
#include <vector>

namespace gbe::density {

using cplx = std::complex<double>;

// Oscillatory Fourier-Laplace factor
//     f_hat(alpha, E) = sqrt(alpha / Gamma(alpha)) * int_0^inf t^(alpha-1)
//                       exp(-t^2/2 + i E t) dt
// evaluated by an endpoint-weighted series over [0, t0] (exact moments of the
// t^(alpha-1) weight, any alpha > 0) plus composite Gauss-Legendre panels
// sized to the oscillation. Throws precision_error when oscillatory
// cancellation exhausts double precision (roughly E^2/4 > 60); dos() falls
// back to the truncated-matrix route there.
cplx f_hat(double alpha, double E);

// Density of states mu_bar_alpha(E) = e^{-E^2/2} / (sqrt(2 pi) |f_hat|^2),
// assembled in log space. alpha = 0 returns the standard normal density.
double dos(double alpha, double E);

// Same density through the m-function of the associated-Hermite truncation:
// (1/pi) Im m(E + i eta) at matrix size N. The continued fraction is streamed
// so N in the 1e7..1e8 range costs memory O(1). Note the eigenvalue spacing
// of the truncation near E is about pi/sqrt(N): eta below that spacing
// resolves individual spectral atoms and the value is meaningless, so keep
// eta >= 2 pi / sqrt(N).
double dos_via_truncation(double alpha, double E, long long N, double eta);

// int f_M(x) dmu_alpha(x) with f_M(x) = max(log|E - x|, -M): the logarithmic
// potential with the singularity capped at depth M. The cap region
// contributes at most 2 C e^{-M} (C = density bound).
double log_potential(double alpha, double E, double M);

// Poisson intensity theta_E = exp(-E^2/2 + 2 alpha log_potential) /
// (sqrt(2 pi) Gamma(alpha + 1)); equals dos(alpha, E).
double theta_e(double alpha, double E, double M = 30.0);

// Stieltjes transform sum_j w_j / (lambda_j - z) of a discrete measure,
// Im z > 0. Uniform weights 1/n when `weights` is empty.
cplx stieltjes_discrete(const std::vector<double>& points, const std::vector<double>& weights,
                        cplx z);

// int dos(alpha, x) dx over a range wide enough for the Gaussian tails;
// should be 1 to ~1e-8.
double dos_normalization(double alpha);

// Width of the grid that carries all but ~1e-30 of the mass.
double support_halfwidth(double alpha);

// Evaluation knobs plus the alpha parameter, for callers that sweep E.
struct DensityModel {
    double alpha = 1.0;
    double trunc_eta = 1e-3;
    long long trunc_n = 40'000'000;

    double operator()(double E) const { return dos(alpha, E); }
    double truncated(double E) const { return dos_via_truncation(alpha, E, trunc_n, trunc_eta); }
    double theta(double E) const { return theta_e(alpha, E); }
};

} // namespace gbe::density
