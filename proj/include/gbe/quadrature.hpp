#pragma once

#include <complex>
#include <functional>

namespace gbe::quad {

// 16-node Gauss-Legendre rule on [-1, 1]; nodes/weights computed once by
// Newton iteration on the Legendre recurrence (machine accurate).
struct GaussLegendre16 {
    double node[16];
    double weight[16];
};
const GaussLegendre16& gl16();

// Integral of f over [a, b] by composite 16-node Gauss-Legendre with panels
// of width at most `panel`.
double integrate_panels(const std::function<double(double)>& f, double a, double b, double panel);

std::complex<double> integrate_panels_c(const std::function<std::complex<double>(double)>& f,
                                        double a, double b, double panel);

} // namespace gbe::quad
