#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "gbe/jacobi.hpp"
#include "gbe/random.hpp"
#include "gbe/tridiag.hpp"

namespace gbe::stats {

using jacobi::JacobiMatrix;
using randsrc::RandomStream;
using cplx = std::complex<double>;

// Draws one matrix per replica; must be a pure function of the stream.
using MatrixSampler = std::function<JacobiMatrix(RandomStream&)>;

// Gaussian beta ensemble sampler in the high-temperature scaling beta = 2 alpha / n.
MatrixSampler gbe_sampler(std::size_t n, double alpha);
MatrixSampler iid_sampler(std::size_t n, double alpha);

// ---------------------------------------------------------------------------
// Test functions

struct TestFunction {
    std::string id;
    std::function<double(double)> f;
    std::function<double(double)> df;
    int monomial_degree = -1;  // >= 0 when f(x) = x^k, enabling the trace path
};

// x^k for k = 0..6.
TestFunction monomial(int k);

// Capped logarithm f_M(x) = max(log|E - x|, -M); derivative 1/(x - E) outside
// the cap, 0 inside.
TestFunction capped_log(double E, double M);

// Lookup by id: "1", "x", "x2", ..., "x6". Throws invalid_argument otherwise.
TestFunction test_function_by_id(const std::string& id);

// ---------------------------------------------------------------------------
// Linear statistics

// (1/n) sum f(lambda_j).
double linear_stat(const std::vector<double>& eigs, const TestFunction& f);

// (1/n) Tr J^k through banded matrix powers; exact trace identity, no
// eigensolve. k <= 12.
double moment_trace(const JacobiMatrix& J, int k);

// (1/n) Tr f(J): moment_trace when f is a monomial, eigensolver otherwise.
double linear_stat_matrix(const JacobiMatrix& J, const TestFunction& f);

// ---------------------------------------------------------------------------
// CLT experiments

struct CltSummary {
    std::string f_id;
    std::size_t replicas = 0;
    std::size_t skipped = 0;
    // mean is the replica average of <L_n, f>; the higher moments describe
    // S_r = sqrt(n) (<L_n, f> - sample mean).
    double mean = 0, variance = 0, skewness = 0, excess_kurtosis = 0;
    double mean_se = 0, variance_se = 0;
    double ge_bound = 0;  // <mean L_n, (f')^2> Monte Carlo estimate
    double ks_stat = 0, ks_p = 0;  // standardized statistic against N(0,1)
};

CltSummary clt_experiment(std::size_t n, double alpha, const TestFunction& f,
                          std::size_t replicas, std::uint64_t seed, unsigned workers = 0);

// n * Var[<L_n, p>] for the i.i.d. model J_alpha, Monte Carlo over replicas.
// alpha = 0 degenerates to a diagonal matrix of normals and is sampled as
// such. Returns the estimate and its standard error.
struct VarianceEstimate {
    double value = 0, se = 0;
    std::size_t skipped = 0;
};
VarianceEstimate sigma2_iid(double alpha, const TestFunction& p, std::size_t n,
                            std::size_t replicas, std::uint64_t seed, unsigned workers = 0);

// Trapezoid integral of sigma2_iid(u * alpha) over u in [0, 1] on a
// grid_size-point grid.
VarianceEstimate sigma2_integral(double alpha, const TestFunction& p, std::size_t grid_size,
                                 std::size_t n, std::size_t replicas, std::uint64_t seed,
                                 unsigned workers = 0);

// ---------------------------------------------------------------------------
// Local statistics

struct LocalProcessSample {
    double reference_energy = 0;
    double window = 0;          // half-width W in rescaled units
    std::size_t n = 0;          // matrix size used for the rescaling
    std::vector<double> points; // n (lambda_j - E), sorted, |p| <= W
};

// Rescaled points n (lambda_j - E) inside [-W, W] from a full eigenvalue list.
LocalProcessSample local_process(const std::vector<double>& eigs, std::size_t n, double E,
                                 double W);

// Same sample extracted directly from the matrix through Sturm bracketing of
// the window E +- (W + 5)/n; cost is per-point, not per-matrix-dimension.
LocalProcessSample local_process_matrix(const JacobiMatrix& J, double E, double W);

// sum_j f_zeta(n (lambda_j - E)) with f_zeta(x) = tau / ((x - sigma)^2 + tau^2)
// = (1/n) Im Tr (J - E - zeta/n)^{-1}.
double xi_f_zeta(const std::vector<double>& eigs, std::size_t n, double E, cplx zeta);

// The same statistic through the resolvent trace (no eigensolve).
double xi_f_zeta_resolvent(const JacobiMatrix& J, double E, cplx zeta);

// ---------------------------------------------------------------------------
// Poisson diagnostics

struct Interval {
    double lo = 0, hi = 0;  // half-open (lo, hi]
    double length() const { return hi - lo; }
};

struct IntervalStats {
    Interval interval;
    double count_mean = 0, count_mean_se = 0;
    double count_var = 0;
    double var_mean_ratio = 0, var_mean_ratio_se = 0;
};

struct PoissonDiagnostics {
    std::vector<IntervalStats> intervals;
    std::vector<std::vector<std::uint32_t>> counts;  // [interval][replica]
    double cross_covariance = 0, cross_covariance_se = 0;  // first interval pair
    std::vector<double> gaps;  // interior nearest-neighbor gaps, boundary gaps dropped
    double gap_ks_stat = 0, gap_ks_p = 0;
    double theta = 0;
};

// Reference CDF for interior gaps of a homogeneous Poisson process of
// intensity theta observed in a window of the given length: the exponential
// law tilted by the (window - g) factor that both gap endpoints must fit.
double window_gap_cdf(double g, double theta, double window_length);

PoissonDiagnostics poisson_diagnostics(const std::vector<LocalProcessSample>& samples,
                                       double theta, const std::vector<Interval>& intervals);

// ---------------------------------------------------------------------------
// Resolvent-based checks

struct WegnerResult {
    std::vector<double> mean_im_g;  // per site x
    std::vector<double> se_im_g;
    double estimate = 0;   // max over x of the mean
    double estimate_se = 0;
    double bound = 0;      // pi * sup-density of the diagonal law = sqrt(pi/2)
    bool pass = false;     // estimate <= bound + 3 se
    std::size_t skipped = 0;
};

WegnerResult wegner_check(const MatrixSampler& sampler, cplx z, std::size_t replicas,
                          std::uint64_t seed, unsigned workers = 0);

struct MinamiRow {
    double interval_length = 0;
    double p_ge2 = 0, p_ge2_se = 0;
    double poisson_reference = 0;  // 1 - e^-m (1+m) for a Poisson with the same mean count
};

struct MinamiResult {
    std::vector<MinamiRow> rows;  // |I| and |I|/2
    double ratio = 0, ratio_se = 0;
};

// Splits each sampled matrix into blocks of length `block_len`, counts
// eigenvalues of each block restriction in E + I/block_len (block-local
// rescaling), and reports P(count >= 2) for |I| and |I|/2.
MinamiResult minami_check(const MatrixSampler& sampler, double E, double interval_length,
                          std::size_t block_len, std::size_t block_samples, std::uint64_t seed,
                          unsigned workers = 0);

struct DecayFit {
    std::vector<double> mean_moment;  // E[|G(z;1,x)|^s] for x = 1..max_distance
    std::vector<double> se_moment;
    double slope = 0, intercept = 0, r2 = 0;
    double m_s = 0, gamma_s = 0;  // exp(intercept), -slope
    std::size_t skipped = 0;
};

// Fractional-moment decay of the first resolvent row; least-squares fit of
// log E[|G(z;1,x)|^s] over x in [fit_lo, fit_hi]. Requires 0 < s < 1/2; a z
// on the real axis is nudged to Im z = 1e-8.
DecayFit green_decay(const MatrixSampler& sampler, cplx z, double s, std::size_t replicas,
                     std::size_t max_distance, std::uint64_t seed, unsigned workers = 0,
                     std::size_t fit_lo = 10, std::size_t fit_hi = 100);

// Histogram estimate of the mean eigenvalue density at E:
// E[#{lambda in E +- bin/2}] / (n bin).
VarianceEstimate mean_density_estimate(const MatrixSampler& sampler, double E, double bin,
                                       std::size_t replicas, std::uint64_t seed,
                                       unsigned workers = 0);

// ---------------------------------------------------------------------------
// Goodness of fit

struct KsResult {
    double statistic = 0;
    double p_value = 0;
};

// One-sample Kolmogorov-Smirnov against an arbitrary CDF; p-value from the
// asymptotic Kolmogorov series (accurate for samples of ~1e3 and up).
KsResult ks_statistic(std::vector<double> sample, const std::function<double(double)>& cdf);

double standard_normal_cdf(double x);

} // namespace gbe::stats
