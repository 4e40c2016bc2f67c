#pragma once

// Test-only reference implementations, kept independent of the library code
// paths they are used to check.

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "gbe/jacobi.hpp"
#include "gbe/random.hpp"

namespace oracles {

using cplx = std::complex<double>;
using Dense = std::vector<std::vector<double>>;

inline Dense dense_from(const gbe::jacobi::JacobiMatrix& J) {
    const std::size_t n = J.size();
    Dense A(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        A[i][i] = J.diag()[i];
        if (i + 1 < n) A[i][i + 1] = A[i + 1][i] = J.offdiag()[i];
    }
    return A;
}

// (A^k)(i, j) by repeated dense multiplication.
inline Dense dense_power(const Dense& A, int k) {
    const std::size_t n = A.size();
    Dense R(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) R[i][i] = 1.0;
    for (int s = 0; s < k; ++s) {
        Dense T(n, std::vector<double>(n, 0.0));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t l = 0; l < n; ++l)
                for (std::size_t j = 0; j < n; ++j) T[i][j] += R[i][l] * A[l][j];
        R = std::move(T);
    }
    return R;
}

// det(z I - J) by complex LU with partial pivoting.
inline cplx dense_char_poly(const gbe::jacobi::JacobiMatrix& J, cplx z) {
    const std::size_t n = J.size();
    std::vector<std::vector<cplx>> A(n, std::vector<cplx>(n, cplx{0, 0}));
    for (std::size_t i = 0; i < n; ++i) {
        A[i][i] = z - J.diag()[i];
        if (i + 1 < n) A[i][i + 1] = A[i + 1][i] = cplx{-J.offdiag()[i], 0.0};
    }
    cplx det{1.0, 0.0};
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        for (std::size_t r = c + 1; r < n; ++r)
            if (std::abs(A[r][c]) > std::abs(A[p][c])) p = r;
        if (p != c) {
            std::swap(A[p], A[c]);
            det = -det;
        }
        det *= A[c][c];
        if (A[c][c] == cplx{0, 0}) return {0, 0};
        for (std::size_t r = c + 1; r < n; ++r) {
            cplx m = A[r][c] / A[c][c];
            for (std::size_t cc = c; cc < n; ++cc) A[r][cc] -= m * A[c][cc];
        }
    }
    return det;
}

// Full (J - z)^{-1} by complex Gauss-Jordan elimination.
inline std::vector<std::vector<cplx>> dense_resolvent(const gbe::jacobi::JacobiMatrix& J, cplx z) {
    const std::size_t n = J.size();
    std::vector<std::vector<cplx>> A(n, std::vector<cplx>(n, cplx{0, 0}));
    std::vector<std::vector<cplx>> I(n, std::vector<cplx>(n, cplx{0, 0}));
    for (std::size_t i = 0; i < n; ++i) {
        A[i][i] = J.diag()[i] - z;
        I[i][i] = 1.0;
        if (i + 1 < n) A[i][i + 1] = A[i + 1][i] = cplx{J.offdiag()[i], 0.0};
    }
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        for (std::size_t r = c + 1; r < n; ++r)
            if (std::abs(A[r][c]) > std::abs(A[p][c])) p = r;
        std::swap(A[p], A[c]);
        std::swap(I[p], I[c]);
        cplx piv = A[c][c];
        for (std::size_t cc = 0; cc < n; ++cc) {
            A[c][cc] /= piv;
            I[c][cc] /= piv;
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (r == c) continue;
            cplx m = A[r][c];
            for (std::size_t cc = 0; cc < n; ++cc) {
                A[r][cc] -= m * A[c][cc];
                I[r][cc] -= m * I[c][cc];
            }
        }
    }
    return I;
}

// Regularized lower incomplete gamma P(a, x) (series + continued fraction).
inline double gamma_p(double a, double x) {
    if (x <= 0.0) return 0.0;
    if (x < a + 1.0) {
        double ap = a, sum = 1.0 / a, del = sum;
        for (int i = 0; i < 500; ++i) {
            ap += 1.0;
            del *= x / ap;
            sum += del;
            if (std::fabs(del) < std::fabs(sum) * 1e-15) break;
        }
        return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
    }
    double b = x + 1.0 - a, c = 1e300, d = 1.0 / b, h = d;
    for (int i = 1; i < 500; ++i) {
        double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < 1e-300) d = 1e-300;
        c = b + an / c;
        if (std::fabs(c) < 1e-300) c = 1e-300;
        d = 1.0 / d;
        double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < 1e-15) break;
    }
    return 1.0 - std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

// Gamma(shape, 1) quantile by bisection on gamma_p.
inline double gamma_quantile(double shape, double u) {
    double lo = 0.0, hi = std::max(shape * 20.0, 50.0);
    for (int i = 0; i < 200; ++i) {
        double mid = 0.5 * (lo + hi);
        if (gamma_p(shape, mid) < u) lo = mid;
        else hi = mid;
    }
    return 0.5 * (lo + hi);
}

// Two-sample Kolmogorov-Smirnov statistic.
inline double ks_two_sample(std::vector<double> a, std::vector<double> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    double d = 0.0;
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] <= b[j]) ++i;
        else ++j;
        double fa = static_cast<double>(i) / a.size();
        double fb = static_cast<double>(j) / b.size();
        d = std::max(d, std::fabs(fa - fb));
    }
    return d;
}

// Critical value for a two-sample KS test at the 1% level.
inline double ks_two_sample_crit_1pct(std::size_t n, std::size_t m) {
    return 1.628 * std::sqrt(static_cast<double>(n + m) / (static_cast<double>(n) * m));
}

// Poisson(mean) count by inversion; fine for small means.
inline unsigned poisson_count(double mean, gbe::randsrc::RandomStream& stream) {
    double L = std::exp(-mean), p = 1.0;
    unsigned k = 0;
    do {
        ++k;
        p *= stream.uniform01();
    } while (p > L);
    return k - 1;
}

} // namespace oracles
