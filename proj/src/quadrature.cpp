#include "gbe/quadrature.hpp"

#include <cmath>

namespace gbe::quad {

namespace {

GaussLegendre16 make_gl16() {
    GaussLegendre16 r{};
    const int n = 16;
    for (int i = 0; i < n; ++i) {
        // Chebyshev initial guess, Newton on P_n.
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            double dp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::fabs(dx) < 1e-16) break;
        }
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= n; ++k) {
            double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        double dp = n * (x * p1 - p0) / (x * x - 1.0);
        r.node[i] = x;
        r.weight[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return r;
}

} // namespace

const GaussLegendre16& gl16() {
    static const GaussLegendre16 rule = make_gl16();
    return rule;
}

double integrate_panels(const std::function<double(double)>& f, double a, double b, double panel) {
    const auto& g = gl16();
    double total = 0.0;
    double x0 = a;
    while (x0 < b) {
        double x1 = std::min(x0 + panel, b);
        double mid = 0.5 * (x0 + x1), half = 0.5 * (x1 - x0);
        double s = 0.0;
        for (int i = 0; i < 16; ++i) s += g.weight[i] * f(mid + half * g.node[i]);
        total += half * s;
        x0 = x1;
    }
    return total;
}

std::complex<double> integrate_panels_c(const std::function<std::complex<double>(double)>& f,
                                        double a, double b, double panel) {
    const auto& g = gl16();
    std::complex<double> total{0.0, 0.0};
    double x0 = a;
    while (x0 < b) {
        double x1 = std::min(x0 + panel, b);
        double mid = 0.5 * (x0 + x1), half = 0.5 * (x1 - x0);
        std::complex<double> s{0.0, 0.0};
        for (int i = 0; i < 16; ++i) s += g.weight[i] * f(mid + half * g.node[i]);
        total += half * s;
        x0 = x1;
    }
    return total;
}

} // namespace gbe::quad
