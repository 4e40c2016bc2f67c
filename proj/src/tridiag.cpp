#include "gbe/tridiag.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "gbe/common.hpp"

namespace gbe::eig {

namespace {

constexpr double kBig = 0x1p400;    // rescale threshold for transfer solutions
constexpr int kRescale = 400;

double cplx_mag(cplx v) { return std::max(std::fabs(v.real()), std::fabs(v.imag())); }

struct GershgorinBounds {
    double lo, hi, radius;
};

GershgorinBounds gershgorin(const JacobiMatrix& J) {
    const auto& a = J.diag();
    const auto& b = J.offdiag();
    const std::size_t n = J.size();
    double lo = a[0], hi = a[0];
    for (std::size_t i = 0; i < n; ++i) {
        double r = (i > 0 ? std::fabs(b[i - 1]) : 0.0) + (i + 1 < n ? std::fabs(b[i]) : 0.0);
        lo = std::min(lo, a[i] - r);
        hi = std::max(hi, a[i] + r);
    }
    double radius = std::max(std::fabs(lo), std::fabs(hi));
    return {lo, hi, radius};
}

double pivmin_for(const JacobiMatrix& J) {
    double maxb2 = 1.0;
    for (double b : J.offdiag()) maxb2 = std::max(maxb2, b * b);
    return std::numeric_limits<double>::min() * maxb2;
}

std::size_t sturm_count_impl(const JacobiMatrix& J, double x, double pivmin) {
    const auto& a = J.diag();
    const auto& b = J.offdiag();
    const std::size_t n = J.size();
    std::size_t count = 0;
    double d = a[0] - x;
    if (std::fabs(d) < pivmin) d = -pivmin;
    if (d < 0.0) ++count;
    for (std::size_t i = 1; i < n; ++i) {
        d = a[i] - x - b[i - 1] * b[i - 1] / d;
        if (std::fabs(d) < pivmin) d = -pivmin;
        if (d < 0.0) ++count;
    }
    return count;
}

// Log derivative of det(xI - J): P'(x)/P(x) = sum_j d'_j/d_j over the Sturm
// ratio sequence. Returns false when a pivot guard triggers, in which case
// the Newton polish is skipped for this point.
bool charpoly_log_deriv(const JacobiMatrix& J, double x, double pivmin, double& out) {
    const auto& a = J.diag();
    const auto& b = J.offdiag();
    const std::size_t n = J.size();
    double d = a[0] - x;
    if (std::fabs(d) < pivmin) return false;
    double dp = -1.0;              // d(d_j)/dx
    double acc = dp / d;
    for (std::size_t i = 1; i < n; ++i) {
        double b2 = b[i - 1] * b[i - 1];
        double dnew = a[i] - x - b2 / d;
        if (std::fabs(dnew) < pivmin) return false;
        double dpnew = -1.0 + b2 * dp / (d * d);
        d = dnew;
        dp = dpnew;
        acc += dp / d;
    }
    // P(x) = prod (x - lambda) has P'/P = sum 1/(x - lambda); the d_j sequence
    // computes det(J - x)-flavored ratios whose log derivative is -that.
    out = -acc;
    return true;
}

double bisect_kth(const JacobiMatrix& J, std::size_t k, double lo, double hi, double tol,
                  double pivmin) {
    // Invariant: count(lo) < k <= count(hi).
    for (int it = 0; it < 200 && (hi - lo) > tol; ++it) {
        double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (sturm_count_impl(J, mid, pivmin) >= k) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    double x = 0.5 * (lo + hi);
    // Newton polish on the characteristic polynomial, kept inside the bracket.
    for (int it = 0; it < 2; ++it) {
        double lp;
        if (!charpoly_log_deriv(J, x, pivmin, lp) || lp == 0.0 || !std::isfinite(lp)) break;
        double step = -1.0 / lp;
        double xn = x + step;
        if (!(xn > lo && xn < hi)) break;
        x = xn;
    }
    return x;
}

void enforce_increasing(std::vector<double>& xs) {
    for (std::size_t i = 1; i < xs.size(); ++i) {
        if (!(xs[i] > xs[i - 1]))
            xs[i] = std::nextafter(xs[i - 1], std::numeric_limits<double>::infinity());
    }
}

double default_tol(const JacobiMatrix& J, double tol) {
    if (tol > 0.0) return tol;
    return 1e-12 * std::max(1.0, gershgorin(J).radius);
}

} // namespace

cplx ScaledComplex::value() const {
    return {std::ldexp(mantissa.real(), static_cast<int>(exponent)),
            std::ldexp(mantissa.imag(), static_cast<int>(exponent))};
}

double ScaledComplex::log_abs() const {
    return std::log(std::abs(mantissa)) + static_cast<double>(exponent) * std::log(2.0);
}

std::size_t sturm_count(const JacobiMatrix& J, double x) {
    return sturm_count_impl(J, x, pivmin_for(J));
}

std::vector<double> eigenvalues(const JacobiMatrix& J, double tol) {
    const std::size_t n = J.size();
    auto g = gershgorin(J);
    tol = default_tol(J, tol);
    double pad = 1e-10 * std::max(1.0, g.radius) + tol;
    double lo = g.lo - pad, hi = g.hi + pad;
    double pivmin = pivmin_for(J);

    std::vector<double> eigs(n);
    for (std::size_t k = 1; k <= n; ++k) {
        eigs[k - 1] = bisect_kth(J, k, lo, hi, tol, pivmin);
    }
    enforce_increasing(eigs);
    return eigs;
}

std::vector<double> eigenvalues_in_interval(const JacobiMatrix& J, double lo, double hi,
                                            double tol) {
    if (!(lo <= hi)) throw std::invalid_argument("eigenvalues_in_interval: need lo <= hi");
    tol = default_tol(J, tol);
    double pivmin = pivmin_for(J);
    std::size_t klo = sturm_count_impl(J, lo, pivmin);
    std::size_t khi = sturm_count_impl(J, hi, pivmin);
    std::vector<double> eigs;
    eigs.reserve(khi - klo);
    for (std::size_t k = klo + 1; k <= khi; ++k) {
        eigs.push_back(bisect_kth(J, k, lo, hi, tol, pivmin));
    }
    enforce_increasing(eigs);
    return eigs;
}

std::vector<double> spectral_weights(const JacobiMatrix& J, const std::vector<double>& eigs,
                                     double lambda_err) {
    const std::size_t n = J.size();
    if (eigs.size() != n) throw std::invalid_argument("spectral_weights: need n eigenvalues");
    auto g = gershgorin(J);
    double sep_floor = 64.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, g.radius);
    for (std::size_t i = 1; i < n; ++i) {
        if (!(eigs[i] - eigs[i - 1] > sep_floor))
            throw precision_error("spectral_weights: numerically degenerate eigenvalues");
    }

    const auto& a = J.diag();
    const auto& b = J.offdiag();
    const double ln2 = std::log(2.0);
    const double eps = std::numeric_limits<double>::epsilon();
    const double lam_err = lambda_err > 0.0 ? lambda_err : default_tol(J, 0.0);
    std::vector<double> w(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double lam = eigs[j];
        // Orthonormal polynomial values u_k = p_{k-1}(lam), u_1 = 1, with a
        // propagated noise bound (arithmetic rounding plus the eigenvalue
        // uncertainty entering through the (lam - a) factors). Once the
        // recursion output drops below the noise floor the true continuation
        // is a decayed solution whose contribution to the normalization is
        // negligible, while continuing would amplify pure noise through the
        // next weak subdiagonal; stop accumulating there. Resonant cases a
        // truncation cannot represent are caught by the final sum check.
        double uprev = 0.0, u = 1.0;
        double nprev = 0.0, nu = 0.0;
        double sumsq = 1.0;
        long ex = 0;  // current values are scaled by 2^ex
        for (std::size_t i = 1; i < n; ++i) {
            double t1 = (lam - a[i - 1]) * u;
            double t2 = (i >= 2 ? b[i - 2] * uprev : 0.0);
            double unext = (t1 - t2) / b[i - 1];
            double nnext = (std::fabs(lam - a[i - 1]) * nu + (i >= 2 ? b[i - 2] * nprev : 0.0) +
                            4.0 * eps * (std::fabs(t1) + std::fabs(t2)) + lam_err * std::fabs(u)) /
                           b[i - 1];
            // A genuine solution cannot be small at two adjacent sites, so
            // only two consecutive noise-dominated components mark the point
            // where the continuation is lost (a single dip is just a node).
            if (std::fabs(unext) < 2.0 * nnext && std::fabs(u) < 2.0 * nu) break;
            uprev = u;
            u = unext;
            nprev = nu;
            nu = nnext;
            double mag = std::fabs(u);
            if (mag > kBig) {
                u = std::ldexp(u, -kRescale);
                uprev = std::ldexp(uprev, -kRescale);
                nu = std::ldexp(nu, -kRescale);
                nprev = std::ldexp(nprev, -kRescale);
                sumsq = std::ldexp(sumsq, -2 * kRescale);
                ex += kRescale;
            }
            sumsq += u * u;
        }
        // q^2 = 1 / (sumsq * 2^(2 ex)), evaluated in log space.
        double logq2 = -(std::log(sumsq) + 2.0 * static_cast<double>(ex) * ln2);
        double q2 = std::exp(logq2);
        w[j] = std::max(q2, std::numeric_limits<double>::min());
    }

    double total = 0.0;
    for (double x : w) total += x;
    if (std::fabs(total - 1.0) > 1e-8)
        throw precision_error("spectral_weights: weights sum to " + std::to_string(total));
    return w;
}

SpectralDecomposition decompose(const JacobiMatrix& J, double tol) {
    // Weight accuracy is limited by eigenvalue accuracy through the weak-link
    // amplification, so the combined solve bisects close to machine
    // resolution instead of the looser standalone default.
    if (tol <= 0.0)
        tol = 8.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, gershgorin(J).radius);
    SpectralDecomposition d;
    d.eigenvalues = eigenvalues(J, tol);
    d.weights = spectral_weights(J, d.eigenvalues, tol);
    return d;
}

ScaledComplex char_poly(const JacobiMatrix& J, cplx z) {
    const auto& a = J.diag();
    const auto& b = J.offdiag();
    const std::size_t n = J.size();
    cplx dprev{1.0, 0.0}, dprev2{0.0, 0.0};  // D_0 = 1, D_{-1} = 0
    long ex = 0;
    for (std::size_t i = 0; i < n; ++i) {
        cplx d = (z - a[i]) * dprev - (i >= 1 ? b[i - 1] * b[i - 1] * dprev2 : cplx{0, 0});
        dprev2 = dprev;
        dprev = d;
        double mag = cplx_mag(dprev);
        if (mag > kBig || (mag > 0.0 && mag < 1.0 / kBig)) {
            int k = std::ilogb(mag);
            dprev = {std::ldexp(dprev.real(), -k), std::ldexp(dprev.imag(), -k)};
            dprev2 = {std::ldexp(dprev2.real(), -k), std::ldexp(dprev2.imag(), -k)};
            ex += k;
        }
    }
    return {dprev, ex};
}

namespace {

struct TransferSolutions {
    // phi grows from row 1, psi from row n; entry i is stored 1-based.
    std::vector<cplx> phi, psi;
    std::vector<long> phi_ex, psi_ex;
    cplx w_mant;
    long w_ex = 0;
};

// Solves the three-term recursion from both ends and fixes the discrete
// Wronskian W = b_j (phi_j psi_{j+1} - phi_{j+1} psi_j) at the index where it
// is computed with the least cancellation.
TransferSolutions transfer_solutions(const JacobiMatrix& J, cplx z) {
    const auto& a = J.diag();
    const auto& b = J.offdiag();
    const std::size_t n = J.size();
    TransferSolutions t;
    t.phi.assign(n + 1, cplx{});
    t.psi.assign(n + 1, cplx{});
    t.phi_ex.assign(n + 1, 0);
    t.psi_ex.assign(n + 1, 0);

    auto renorm = [](cplx& v, long& ex) {
        double mag = cplx_mag(v);
        if (mag > kBig || (mag > 0.0 && mag < 1.0 / kBig)) {
            int k = std::ilogb(mag);
            v = {std::ldexp(v.real(), -k), std::ldexp(v.imag(), -k)};
            ex += k;
        }
    };

    t.phi[1] = {1.0, 0.0};
    if (n >= 2) {
        t.phi[2] = (z - a[0]) / b[0];
        t.phi_ex[2] = 0;
        renorm(t.phi[2], t.phi_ex[2]);
        for (std::size_t j = 2; j < n; ++j) {
            // row j: b_{j-1} phi_{j-1} + (a_j - z) phi_j + b_j phi_{j+1} = 0
            long ex = t.phi_ex[j];
            cplx lag = t.phi[j - 1];
            int shift = static_cast<int>(t.phi_ex[j - 1] - ex);
            lag = {std::ldexp(lag.real(), shift), std::ldexp(lag.imag(), shift)};
            cplx v = ((z - a[j - 1]) * t.phi[j] - b[j - 2] * lag) / b[j - 1];
            t.phi[j + 1] = v;
            t.phi_ex[j + 1] = ex;
            renorm(t.phi[j + 1], t.phi_ex[j + 1]);
        }
    }

    t.psi[n] = {1.0, 0.0};
    if (n >= 2) {
        t.psi[n - 1] = (z - a[n - 1]) / b[n - 2];
        t.psi_ex[n - 1] = 0;
        renorm(t.psi[n - 1], t.psi_ex[n - 1]);
        for (std::size_t j = n - 1; j >= 2; --j) {
            long ex = t.psi_ex[j];
            cplx lag = t.psi[j + 1];
            int shift = static_cast<int>(t.psi_ex[j + 1] - ex);
            lag = {std::ldexp(lag.real(), shift), std::ldexp(lag.imag(), shift)};
            cplx v = ((z - a[j - 1]) * t.psi[j] - b[j - 1] * lag) / b[j - 2];
            t.psi[j - 1] = v;
            t.psi_ex[j - 1] = ex;
            renorm(t.psi[j - 1], t.psi_ex[j - 1]);
        }
    }

    // Wronskian: constant over j in exact arithmetic; pick the index where
    // the two products cancel least.
    double best_rel = -1.0;
    for (std::size_t j = 1; j < n; ++j) {
        long e1 = t.phi_ex[j] + t.psi_ex[j + 1];
        long e2 = t.phi_ex[j + 1] + t.psi_ex[j];
        long ce = std::max(e1, e2);
        cplx term1 = t.phi[j] * t.psi[j + 1];
        cplx term2 = t.phi[j + 1] * t.psi[j];
        term1 = {std::ldexp(term1.real(), static_cast<int>(e1 - ce)),
                 std::ldexp(term1.imag(), static_cast<int>(e1 - ce))};
        term2 = {std::ldexp(term2.real(), static_cast<int>(e2 - ce)),
                 std::ldexp(term2.imag(), static_cast<int>(e2 - ce))};
        cplx diff = term1 - term2;
        double denom = std::abs(term1) + std::abs(term2);
        if (denom == 0.0) continue;
        double rel = std::abs(diff) / denom;
        if (rel > best_rel) {
            best_rel = rel;
            t.w_mant = b[j - 1] * diff;
            t.w_ex = ce;
        }
    }
    if (best_rel < 1e-13)
        throw precision_error("green function: catastrophic cancellation in the Wronskian");
    return t;
}

void require_upper_half(cplx z, const char* who) {
    if (!(z.imag() > 0.0)) throw std::domain_error(std::string(who) + ": need Im z > 0");
}

cplx assemble_entry(const TransferSolutions& t, std::size_t x, std::size_t y) {
    // x <= y assumed; G = phi_x psi_y / W.
    cplx m = t.phi[x] * t.psi[y] / t.w_mant;
    long ex = t.phi_ex[x] + t.psi_ex[y] - t.w_ex;
    return {std::ldexp(m.real(), static_cast<int>(ex)), std::ldexp(m.imag(), static_cast<int>(ex))};
}

} // namespace

cplx green_entry(const JacobiMatrix& J, cplx z, std::size_t x, std::size_t y) {
    require_upper_half(z, "green_entry");
    const std::size_t n = J.size();
    if (x < 1 || x > n || y < 1 || y > n) throw std::out_of_range("green_entry: index out of range");
    if (n == 1) return 1.0 / (J.diag()[0] - z);
    if (x > y) std::swap(x, y);
    auto t = transfer_solutions(J, z);
    return assemble_entry(t, x, y);
}

std::vector<cplx> resolvent_diagonal(const JacobiMatrix& J, cplx z) {
    require_upper_half(z, "resolvent_diagonal");
    const std::size_t n = J.size();
    if (n == 1) return {1.0 / (J.diag()[0] - z)};
    auto t = transfer_solutions(J, z);
    std::vector<cplx> out(n);
    for (std::size_t x = 1; x <= n; ++x) out[x - 1] = assemble_entry(t, x, x);
    return out;
}

std::vector<ScaledComplex> resolvent_first_row(const JacobiMatrix& J, cplx z) {
    require_upper_half(z, "resolvent_first_row");
    const std::size_t n = J.size();
    if (n == 1) return {{1.0 / (J.diag()[0] - z), 0}};
    auto t = transfer_solutions(J, z);
    std::vector<ScaledComplex> out(n);
    for (std::size_t y = 1; y <= n; ++y) {
        out[y - 1].mantissa = t.phi[1] * t.psi[y] / t.w_mant;
        out[y - 1].exponent = t.phi_ex[1] + t.psi_ex[y] - t.w_ex;
    }
    return out;
}

cplx resolvent_trace(const JacobiMatrix& J, cplx z) {
    require_upper_half(z, "resolvent_trace");
    const auto& a = J.diag();
    const auto& b = J.offdiag();
    const std::size_t n = J.size();
    // P_j = det(z I - J_{1..j}) and its z derivative, jointly rescaled.
    cplx p{1.0, 0.0}, pm{0.0, 0.0};
    cplx q{0.0, 0.0}, qm{0.0, 0.0};
    for (std::size_t i = 0; i < n; ++i) {
        cplx b2 = (i >= 1) ? cplx{b[i - 1] * b[i - 1], 0.0} : cplx{0.0, 0.0};
        cplx pn = (z - a[i]) * p - b2 * pm;
        cplx qn = p + (z - a[i]) * q - b2 * qm;
        pm = p; p = pn;
        qm = q; q = qn;
        double mag = std::max(std::max(cplx_mag(p), cplx_mag(pm)), std::max(cplx_mag(q), cplx_mag(qm)));
        if (mag > kBig) {
            int k = std::ilogb(mag);
            auto sc = [k](cplx& v) {
                v = {std::ldexp(v.real(), -k), std::ldexp(v.imag(), -k)};
            };
            sc(p); sc(pm); sc(q); sc(qm);
        }
    }
    return -q / p;
}

cplx m_function(const JacobiMatrix& J, cplx z) {
    require_upper_half(z, "m_function");
    const auto& a = J.diag();
    const auto& b = J.offdiag();
    const std::size_t n = J.size();
    cplx m = 1.0 / (a[n - 1] - z);
    for (std::size_t k = n - 1; k >= 1; --k) {
        m = 1.0 / (a[k - 1] - z - b[k - 1] * b[k - 1] * m);
    }
    return m;
}

namespace {

constexpr std::size_t kDenseMax = 16;

void jacobi_rotate_sweeps(std::vector<std::vector<double>>& A, std::vector<std::vector<double>>& V) {
    const std::size_t n = A.size();
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0, fro = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = 0; q < n; ++q) {
                fro += A[p][q] * A[p][q];
                if (p != q) off += A[p][q] * A[p][q];
            }
        if (off <= 1e-28 * std::max(fro, 1e-300)) return;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                if (A[p][q] == 0.0) continue;
                double theta = (A[q][q] - A[p][p]) / (2.0 * A[p][q]);
                double t = (theta >= 0 ? 1.0 : -1.0) /
                           (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
                double c = 1.0 / std::sqrt(t * t + 1.0);
                double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    double akp = A[k][p], akq = A[k][q];
                    A[k][p] = c * akp - s * akq;
                    A[k][q] = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    double apk = A[p][k], aqk = A[q][k];
                    A[p][k] = c * apk - s * aqk;
                    A[q][k] = s * apk + c * aqk;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    double vkp = V[k][p], vkq = V[k][q];
                    V[k][p] = c * vkp - s * vkq;
                    V[k][q] = s * vkp + c * vkq;
                }
            }
        }
    }
}

SpectralDecomposition dense_decompose(const JacobiMatrix& J) {
    const std::size_t n = J.size();
    if (n > kDenseMax) throw std::length_error("dense oracle: n must be <= 16");
    std::vector<std::vector<double>> A(n, std::vector<double>(n, 0.0));
    std::vector<std::vector<double>> V(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        A[i][i] = J.diag()[i];
        V[i][i] = 1.0;
        if (i + 1 < n) A[i][i + 1] = A[i + 1][i] = J.offdiag()[i];
    }
    jacobi_rotate_sweeps(A, V);
    std::vector<std::pair<double, double>> ev(n);
    for (std::size_t j = 0; j < n; ++j) ev[j] = {A[j][j], V[0][j] * V[0][j]};
    std::sort(ev.begin(), ev.end());
    SpectralDecomposition d;
    d.eigenvalues.resize(n);
    d.weights.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
        d.eigenvalues[j] = ev[j].first;
        d.weights[j] = ev[j].second;
    }
    return d;
}

} // namespace

std::vector<double> dense_eig_oracle(const JacobiMatrix& J) {
    return dense_decompose(J).eigenvalues;
}

SpectralDecomposition dense_spectral_oracle(const JacobiMatrix& J) { return dense_decompose(J); }

} // namespace gbe::eig
