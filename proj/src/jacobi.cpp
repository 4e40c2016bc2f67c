#include "gbe/jacobi.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace gbe::jacobi {

JacobiMatrix::JacobiMatrix(std::vector<double> diag, std::vector<double> offdiag)
    : diag_(std::move(diag)), offdiag_(std::move(offdiag)) {
    if (diag_.empty()) throw std::invalid_argument("JacobiMatrix: size must be >= 1");
    if (offdiag_.size() + 1 != diag_.size())
        throw std::invalid_argument("JacobiMatrix: offdiag length must be diag length - 1");
    for (double b : offdiag_) {
        if (!(b > 0.0)) throw std::invalid_argument("JacobiMatrix: offdiagonal entries must be positive");
    }
}

JacobiMatrix sample_gbe(std::size_t n, double beta, randsrc::RandomStream& stream) {
    if (n < 1) throw std::invalid_argument("sample_gbe: n must be >= 1");
    if (!(beta > 0.0)) throw std::invalid_argument("sample_gbe: beta must be positive");
    std::vector<double> d(n), e(n - 1);
    for (auto& x : d) x = randsrc::normal(stream);
    for (std::size_t j = 1; j < n; ++j) {
        e[j - 1] = randsrc::chi_tilde(static_cast<double>(n - j) * beta, stream);
    }
    return JacobiMatrix(std::move(d), std::move(e));
}

JacobiMatrix sample_iid(std::size_t n, double alpha, randsrc::RandomStream& stream) {
    if (n < 1) throw std::invalid_argument("sample_iid: n must be >= 1");
    if (!(alpha > 0.0)) throw std::invalid_argument("sample_iid: alpha must be positive");
    std::vector<double> d(n), e(n - 1);
    for (auto& x : d) x = randsrc::normal(stream);
    for (auto& b : e) b = randsrc::chi_tilde(2.0 * alpha, stream);
    return JacobiMatrix(std::move(d), std::move(e));
}

JacobiMatrix associated_hermite(std::size_t n, double alpha) {
    if (n < 1) throw std::invalid_argument("associated_hermite: n must be >= 1");
    if (alpha < 0.0) throw std::invalid_argument("associated_hermite: alpha must be nonnegative");
    std::vector<double> d(n, 0.0), e(n - 1);
    for (std::size_t k = 1; k < n; ++k) e[k - 1] = std::sqrt(alpha + static_cast<double>(k));
    return JacobiMatrix(std::move(d), std::move(e));
}

JacobiMatrix restriction(const JacobiMatrix& J, std::size_t u, std::size_t v) {
    if (u < 1 || v > J.size() || u > v) throw std::out_of_range("restriction: need 1 <= u <= v <= n");
    std::vector<double> d(J.diag().begin() + (u - 1), J.diag().begin() + v);
    std::vector<double> e;
    if (v > u) e.assign(J.offdiag().begin() + (u - 1), J.offdiag().begin() + (v - 1));
    return JacobiMatrix(std::move(d), std::move(e));
}

void write_csv(const JacobiMatrix& J, std::ostream& os) {
    char buf[64];
    os << "diag,offdiag\n";
    for (std::size_t i = 0; i < J.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g", J.diag()[i]);
        os << buf << ",";
        if (i + 1 < J.size()) {
            std::snprintf(buf, sizeof buf, "%.17g", J.offdiag()[i]);
            os << buf;
        }
        os << "\n";
    }
}

} // namespace gbe::jacobi
