#pragma once

#include <cstddef>
#include <iosfwd>
#include <vector>

#include "gbe/random.hpp"

namespace gbe::jacobi {

// Finite symmetric tridiagonal matrix with strictly positive subdiagonal.
// diag holds a_1..a_n, offdiag holds b_1..b_{n-1}. Immutable after
// construction; safe to share between threads.
class JacobiMatrix {
public:
    JacobiMatrix(std::vector<double> diag, std::vector<double> offdiag);

    std::size_t size() const { return diag_.size(); }
    const std::vector<double>& diag() const { return diag_; }
    const std::vector<double>& offdiag() const { return offdiag_; }

    double a(std::size_t i) const { return diag_[i - 1]; }     // 1-based
    double b(std::size_t j) const { return offdiag_[j - 1]; }  // 1-based

private:
    std::vector<double> diag_;
    std::vector<double> offdiag_;
};

// Gaussian beta ensemble matrix: diagonal entries i.i.d. N(0,1), subdiagonal
// entry j distributed as chi_tilde with (n-j)*beta degrees of freedom.
// Entries are drawn diagonal first, then subdiagonal, each left to right.
JacobiMatrix sample_gbe(std::size_t n, double beta, randsrc::RandomStream& stream);

// i.i.d. model: diagonal N(0,1), subdiagonal chi_tilde with 2*alpha degrees
// of freedom. Same draw order as sample_gbe.
JacobiMatrix sample_iid(std::size_t n, double alpha, randsrc::RandomStream& stream);

// Deterministic matrix with zero diagonal and subdiagonal sqrt(alpha + k),
// k = 1..n-1. Its spectral measure approximates the limiting density of
// states as n grows.
JacobiMatrix associated_hermite(std::size_t n, double alpha);

// Principal submatrix on 1-based index range [u, v].
JacobiMatrix restriction(const JacobiMatrix& J, std::size_t u, std::size_t v);

// Two-column CSV (diag, offdiag; last offdiag cell empty) for debugging.
void write_csv(const JacobiMatrix& J, std::ostream& os);

} // namespace gbe::jacobi
