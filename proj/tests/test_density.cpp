#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "gbe/common.hpp"
#include "gbe/density.hpp"
#include "gbe/jacobi.hpp"
#include "gbe/tridiag.hpp"

using namespace gbe;
using density::cplx;

TEST_CASE("f_hat closed forms") {
    // alpha = 1, E = 0: integral of exp(-t^2/2) = sqrt(pi/2).
    cplx f10 = density::f_hat(1.0, 0.0);
    CHECK(f10.real() == doctest::Approx(std::sqrt(M_PI / 2.0)).epsilon(1e-9));
    CHECK(std::fabs(f10.imag()) < 1e-9);
    CHECK(std::norm(f10) == doctest::Approx(M_PI / 2.0).epsilon(1e-8));

    // alpha = 2, E = 0: integral of t exp(-t^2/2) = 1, prefactor sqrt(2).
    cplx f20 = density::f_hat(2.0, 0.0);
    CHECK(f20.real() == doctest::Approx(std::sqrt(2.0)).epsilon(1e-9));

    CHECK_THROWS_AS(density::f_hat(0.0, 1.0), std::domain_error);
}

TEST_CASE("dos anchors and normalization") {
    CHECK(density::dos(0.0, 0.0) == doctest::Approx(1.0 / std::sqrt(2.0 * M_PI)).epsilon(1e-12));
    double anchor = 2.0 / (M_PI * std::sqrt(2.0 * M_PI));
    CHECK(density::dos(1.0, 0.0) == doctest::Approx(anchor).epsilon(1e-8));
    CHECK(density::dos_normalization(1.0) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("dos is even and positive") {
    for (double alpha : {0.5, 1.0, 2.0}) {
        for (double E : {0.3, 1.1, 2.7, 3.9}) {
            double p = density::dos(alpha, E);
            double n = density::dos(alpha, -E);
            CHECK(p > 0.0);
            CHECK(p == doctest::Approx(n).epsilon(1e-9));
        }
    }
}

TEST_CASE("dos_via_truncation is literally the m-function of the truncation") {
    // The streaming continued fraction must equal the matrix-based route.
    const long long N = 5000;
    const double eta = 1e-3, alpha = 1.0, E = 0.4;
    auto J = jacobi::associated_hermite(static_cast<std::size_t>(N), alpha);
    double via_matrix = eig::m_function(J, {E, eta}).imag() / M_PI;
    double streamed = density::dos_via_truncation(alpha, E, N, eta);
    CHECK(streamed == doctest::Approx(via_matrix).epsilon(1e-12));
}

TEST_CASE("dos_via_truncation converges once eta clears the atom spacing") {
    // Atom spacing of the truncation near E = 0 is ~ pi / sqrt(N): with
    // N = 4e7 and eta = 1e-3 the comb is smoothed out and the value sits on
    // the density.
    const long long N = 40'000'000;
    double d = density::dos(1.0, 0.0);
    double t = density::dos_via_truncation(1.0, 0.0, N, 1e-3);
    CHECK(std::fabs(t - d) < 2e-3);

    // Smoothing-error monotonicity at fixed N: the eta = 1e-2 value is no
    // closer than the eta = 1e-3 value.
    double coarse = density::dos_via_truncation(1.0, 0.0, N, 1e-2);
    CHECK(std::fabs(coarse - d) >= std::fabs(t - d) - 1e-6);

    CHECK_THROWS_AS(density::dos_via_truncation(1.0, 0.0, 50, 1e-3), std::domain_error);
    CHECK_THROWS_AS(density::dos_via_truncation(1.0, 0.0, 5000, 0.0), std::domain_error);
}

TEST_CASE("log_potential cap stability, tail value and symmetry") {
    double v20 = density::log_potential(1.0, 0.0, 20.0);
    double v30 = density::log_potential(1.0, 0.0, 30.0);
    CHECK(std::fabs(v20 - v30) < 1e-8);

    CHECK(density::log_potential(1.0, 50.0, 30.0) == doctest::Approx(std::log(50.0)).epsilon(3e-3));

    CHECK(density::log_potential(1.0, 1.3, 30.0) ==
          doctest::Approx(density::log_potential(1.0, -1.3, 30.0)).epsilon(1e-9));
}

TEST_CASE("theta_E equals the density of states") {
    struct Case {
        double alpha, E;
    } cases[] = {{1.0, 0.0}, {0.5, 1.0}, {2.0, 0.5}};
    for (auto c : cases) {
        double theta = density::theta_e(c.alpha, c.E);
        double d = density::dos(c.alpha, c.E);
        CHECK(std::fabs(theta / d - 1.0) < 1e-3);
    }
}

TEST_CASE("stieltjes_discrete: atom, bounds, and the m-function route") {
    cplx z{0.0, 1.0};
    CHECK(std::abs(density::stieltjes_discrete({0.0}, {}, z) - cplx{0.0, 1.0}) < 1e-15);
    CHECK_THROWS_AS(density::stieltjes_discrete({0.0}, {}, {0.0, -1.0}), std::domain_error);

    randsrc::RandomStream s(31, 0);
    auto J = jacobi::sample_iid(10, 1.0, s);
    auto d = eig::decompose(J);
    CHECK(std::abs(density::stieltjes_discrete(d.eigenvalues, {}, z)) <= 1.0 + 1e-12);

    // Spectral measure's transform is the m-function.
    for (cplx zz : {cplx{0.0, 1.0}, cplx{0.7, 0.3}}) {
        auto via_measure = density::stieltjes_discrete(d.eigenvalues, d.weights, zz);
        CHECK(std::abs(via_measure - eig::m_function(J, zz)) < 1e-8);
    }

    // Lipschitz bound |S(z) - S(z')| <= |z - z'| / (Im z Im z').
    cplx z1{0.4, 0.8}, z2{-0.3, 0.5};
    auto s1 = density::stieltjes_discrete(d.eigenvalues, {}, z1);
    auto s2 = density::stieltjes_discrete(d.eigenvalues, {}, z2);
    CHECK(std::abs(s1 - s2) <= std::abs(z1 - z2) / (z1.imag() * z2.imag()) + 1e-12);
}

TEST_CASE("scaled density interpolates between semicircle and normal") {
    // Large alpha: sqrt(alpha+1) dos(alpha, sqrt(alpha+1) x) approaches the
    // radius-2 semicircle (variance 1); the far-|x| evaluations exercise the
    // truncation fallback inside dos.
    {
        const double a = 400.0, s = std::sqrt(a + 1.0);
        double worst = 0.0;
        for (double x = -1.9; x <= 1.9 + 1e-12; x += 0.1) {
            double scaled = s * density::dos(a, s * x);
            double sc = std::sqrt(std::max(4.0 - x * x, 0.0)) / (2.0 * M_PI);
            worst = std::max(worst, std::fabs(scaled - sc));
        }
        CHECK(worst < 0.01);
    }
    // Small alpha: approaches the standard normal.
    {
        const double a = 0.01, s = std::sqrt(a + 1.0);
        double worst = 0.0;
        for (double x = -3.0; x <= 3.0 + 1e-12; x += 0.25) {
            double scaled = s * density::dos(a, s * x);
            double phi = std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI);
            worst = std::max(worst, std::fabs(scaled - phi));
        }
        CHECK(worst < 0.01);
    }
}

TEST_CASE("f_hat reports unusable oscillatory cancellation instead of garbage") {
    CHECK_THROWS_AS(density::f_hat(400.0, 38.0), precision_error);
}
