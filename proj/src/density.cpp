#include "gbe/density.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "gbe/common.hpp"
#include "gbe/quadrature.hpp"

namespace gbe::density {

namespace {

constexpr double kLn2Pi = 1.8378770664093453;  // log(2 pi)

struct ScaledIntegral {
    cplx value;       // scaled integral I = e^{-peak_log} * true integral
    double abs_mass;  // int |integrand| in the same scaling
    double peak_log;  // log of the envelope maximum that was divided out
};

// Endpoint-weighted series for the head segment [0, t0]:
//   int_0^t0 t^(alpha-1) g(t) dt = sum_k c_k t0^(alpha+k) / (alpha + k)
// with g(t) = e^{-t^2/2 + iEt} = sum c_k t^k and the coefficient recurrence
// (k+1) c_{k+1} = iE c_k - c_{k-1}. t0 is kept at or below 12/|E| so the
// series cancellation stays within ~e^12.
cplx head_series(double alpha, double E, double t0, bool absolute) {
    cplx c_prev{0.0, 0.0};
    cplx c{1.0, 0.0};
    const cplx ie{0.0, E};
    cplx sum{0.0, 0.0};
    double tk = 1.0;  // t0^k
    double magsum = 0.0, prev_mag = 1.0;
    for (int k = 0; k < 200; ++k) {
        cplx coeff = absolute ? cplx{std::abs(c), 0.0} : c;
        cplx term = coeff * (tk / (alpha + k));
        sum += term;
        magsum += std::abs(term);
        // Alternate coefficients vanish at E = 0; stop only on two
        // consecutive negligible terms.
        if (k > 8 && std::abs(term) < 1e-18 * magsum && prev_mag < 1e-18 * magsum) break;
        prev_mag = std::abs(term);
        cplx c_next = (ie * c - c_prev) / static_cast<double>(k + 1);
        c_prev = c;
        c = c_next;
        tk *= t0;
    }
    return sum;
}

// int_0^T t^(alpha-1) e^{-t^2/2} e^{iEt} dt with the envelope maximum divided
// out so the arithmetic stays in range for alpha in the hundreds.
ScaledIntegral fourier_integral(double alpha, double E) {
    const double tpk = alpha > 1.0 ? std::sqrt(alpha - 1.0) : 0.0;
    const double peak_log = alpha > 1.0 ? (alpha - 1.0) * std::log(tpk) - 0.5 * tpk * tpk : 0.0;
    const double T = std::max({10.0, std::fabs(E) + 8.0, tpk + 12.0});

    auto envelope = [&](double t) {
        return std::exp((alpha - 1.0) * std::log(t) - 0.5 * t * t - peak_log);
    };
    auto integrand = [&](double t) -> cplx {
        double env = envelope(t);
        return {env * std::cos(E * t), env * std::sin(E * t)};
    };

    const double t0 = std::min({1.0, T, 12.0 / std::max(1.0, std::fabs(E))});
    // The series computes the unscaled head; fold in t0^alpha e^{-peak_log}.
    double head_scale = std::exp(alpha * std::log(t0) - peak_log);
    cplx head = head_series(alpha, E, t0, false) * head_scale;
    double head_abs = head_series(alpha, E, t0, true).real() * head_scale;

    const double panel = std::min(0.5, 3.0 / std::max(1.0, std::fabs(E)));
    cplx tail = quad::integrate_panels_c(integrand, t0, T, panel);
    double tail_abs = quad::integrate_panels(envelope, t0, T, panel);

    return {head + tail, head_abs + tail_abs, peak_log};
}

// log |f_hat(alpha, E)|^2, or NaN when cancellation leaves no usable digits.
double log_f_hat_abs2(double alpha, double E) {
    auto I = fourier_integral(alpha, E);
    double mag = std::abs(I.value);
    if (!(mag > 3e-11 * I.abs_mass)) return std::numeric_limits<double>::quiet_NaN();
    return std::log(alpha) - std::lgamma(alpha) + 2.0 * I.peak_log + 2.0 * std::log(mag);
}

} // namespace

cplx f_hat(double alpha, double E) {
    if (!(alpha > 0.0)) throw std::domain_error("f_hat: alpha must be positive");
    auto I = fourier_integral(alpha, E);
    double mag = std::abs(I.value);
    if (!(mag > 3e-11 * I.abs_mass))
        throw precision_error("f_hat: oscillatory cancellation exceeds double precision");
    double prefactor_log = 0.5 * (std::log(alpha) - std::lgamma(alpha)) + I.peak_log;
    return I.value * std::exp(prefactor_log);
}

double dos(double alpha, double E) {
    if (alpha < 0.0) throw std::domain_error("dos: alpha must be nonnegative");
    if (alpha == 0.0) return std::exp(-0.5 * E * E - 0.5 * kLn2Pi);
    double lf2 = log_f_hat_abs2(alpha, E);
    if (std::isnan(lf2)) {
        // Far-oscillatory regime (large alpha and |E|): real-axis quadrature
        // has cancelled below double precision. Use the truncated-matrix
        // route with the truncation chosen for ~1e-4 accuracy.
        double eta = 2e-3;
        long long N = static_cast<long long>(1.0e7 + 0.25 * E * E);
        return dos_via_truncation(alpha, E, N, eta);
    }
    return std::exp(-0.5 * E * E - 0.5 * kLn2Pi - lf2);
}

double dos_via_truncation(double alpha, double E, long long N, double eta) {
    if (alpha < 0.0) throw std::domain_error("dos_via_truncation: alpha must be nonnegative");
    if (N < 100) throw std::domain_error("dos_via_truncation: N must be >= 100");
    if (!(eta > 0.0)) throw std::domain_error("dos_via_truncation: eta must be positive");
    const cplx z{E, eta};
    cplx m = 1.0 / (-z);
    for (long long k = N - 1; k >= 1; --k) {
        m = 1.0 / (-z - (alpha + static_cast<double>(k)) * m);
    }
    return m.imag() / M_PI;
}

double support_halfwidth(double alpha) {
    // Gaussian tails shifted by the scale sqrt(alpha+1) of the measure.
    return 2.0 * std::sqrt(alpha + 1.0) + 12.0;
}

double log_potential(double alpha, double E, double M) {
    if (!(alpha > 0.0)) throw std::domain_error("log_potential: alpha must be positive");
    if (!(M > 0.0)) throw std::domain_error("log_potential: M must be positive");

    const double X = support_halfwidth(alpha);
    const double r0 = 0.5;  // inner radius handled by the log substitution

    double far = 0.0;
    auto f_far = [&](double x) { return std::log(std::fabs(E - x)) * dos(alpha, x); };
    if (E - r0 > -X && E + r0 < X) {
        far = quad::integrate_panels(f_far, -X, E - r0, 0.25) +
              quad::integrate_panels(f_far, E + r0, X, 0.25);
    } else if (std::fabs(E) >= X + r0) {
        far = quad::integrate_panels(f_far, -X, X, 0.25);
    } else {
        // E within r0 of the grid edge: widen the grid so the singular part
        // stays inside.
        double Xw = std::fabs(E) + r0 + 4.0;
        far = quad::integrate_panels(f_far, -Xw, E - r0, 0.25) +
              quad::integrate_panels(f_far, E + r0, Xw, 0.25);
    }

    double near = 0.0;
    if (std::fabs(E) < X + r0) {
        // x = E +- e^{-u}: int log(s) g(s) ds over s in (e^{-M}, r0] becomes a
        // smooth integral in u. The panel grid starts at u0 independently of
        // M so values at different caps share the common part exactly.
        auto g_near = [&](double u) {
            double s = std::exp(-u);
            return -u * s * (dos(alpha, E + s) + dos(alpha, E - s));
        };
        const double u0 = std::log(1.0 / r0);
        near = quad::integrate_panels(g_near, u0, M, 0.5);
        // Capped core |E - x| <= e^{-M} contributes -M * mass.
        near += -M * std::exp(-M) * (dos(alpha, E + std::exp(-M)) + dos(alpha, E - std::exp(-M)));
    }

    return far + near;
}

double theta_e(double alpha, double E, double M) {
    double lp = log_potential(alpha, E, M);
    double logtheta = -0.5 * E * E + 2.0 * alpha * lp - 0.5 * kLn2Pi - std::lgamma(alpha + 1.0);
    return std::exp(logtheta);
}

cplx stieltjes_discrete(const std::vector<double>& points, const std::vector<double>& weights,
                        cplx z) {
    if (!(z.imag() > 0.0)) throw std::domain_error("stieltjes_discrete: need Im z > 0");
    if (!weights.empty() && weights.size() != points.size())
        throw std::invalid_argument("stieltjes_discrete: weights/points size mismatch");
    cplx s{0.0, 0.0};
    if (weights.empty()) {
        for (double p : points) s += 1.0 / (p - z);
        s /= static_cast<double>(points.size());
    } else {
        for (std::size_t i = 0; i < points.size(); ++i) s += weights[i] / (points[i] - z);
    }
    return s;
}

double dos_normalization(double alpha) {
    double X = support_halfwidth(alpha);
    return quad::integrate_panels([&](double x) { return dos(alpha, x); }, -X, X, 0.25);
}

} // namespace gbe::density
