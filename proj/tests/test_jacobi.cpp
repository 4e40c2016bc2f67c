#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "gbe/jacobi.hpp"
#include "gbe/tridiag.hpp"
#include "oracles.hpp"

using namespace gbe;
using jacobi::JacobiMatrix;

TEST_CASE("construction invariants") {
    CHECK_THROWS_AS(JacobiMatrix({}, {}), std::invalid_argument);
    CHECK_THROWS_AS(JacobiMatrix({0.0, 0.0}, {0.0}), std::invalid_argument);
    CHECK_THROWS_AS(JacobiMatrix({0.0, 0.0}, {-1.0}), std::invalid_argument);
    CHECK_THROWS_AS(JacobiMatrix({0.0, 0.0}, {1.0, 2.0}), std::invalid_argument);
    JacobiMatrix J({1.0, 2.0}, {3.0});
    CHECK(J.size() == 2);
    CHECK(J.a(2) == 2.0);
    CHECK(J.b(1) == 3.0);
}

TEST_CASE("sample_gbe basics") {
    randsrc::RandomStream s(1, 0);
    auto J1 = jacobi::sample_gbe(1, 0.5, s);
    CHECK(J1.size() == 1);
    CHECK(J1.offdiag().empty());
    CHECK_THROWS_AS(jacobi::sample_gbe(0, 1.0, s), std::invalid_argument);
    CHECK_THROWS_AS(jacobi::sample_gbe(4, 0.0, s), std::invalid_argument);
}

TEST_CASE("sample_gbe second-moment identity: E[Tr T^2] = n + beta n(n-1)/2") {
    randsrc::RandomStream s(2, 0);
    const int reps = 100'000;
    double acc = 0.0;
    for (int r = 0; r < reps; ++r) {
        auto J = jacobi::sample_gbe(4, 1.0, s);
        double t = 0.0;
        for (double a : J.diag()) t += a * a;
        for (double b : J.offdiag()) t += 2.0 * b * b;
        acc += t;
    }
    CHECK(std::fabs(acc / reps - 10.0) < 0.1);
}

TEST_CASE("sample_gbe high-temperature moment: E[<L_n, x^2>] = 1 + beta (n-1)/2") {
    randsrc::RandomStream s(3, 0);
    const int reps = 10'000, n = 100;
    const double beta = 0.02;  // alpha = 1
    double acc = 0.0;
    for (int r = 0; r < reps; ++r) {
        auto J = jacobi::sample_gbe(n, beta, s);
        double t = 0.0;
        for (double a : J.diag()) t += a * a;
        for (double b : J.offdiag()) t += 2.0 * b * b;
        acc += t / n;
    }
    CHECK(std::fabs(acc / reps - 1.99) < 0.02);
}

TEST_CASE("gbe offdiagonal entry j has second moment (n-j) beta / 2") {
    randsrc::RandomStream s(17, 0);
    const int reps = 20'000, n = 6;
    const double beta = 0.8;
    double m2[5] = {0, 0, 0, 0, 0};
    for (int r = 0; r < reps; ++r) {
        auto J = jacobi::sample_gbe(n, beta, s);
        for (int j = 0; j < n - 1; ++j) m2[j] += J.offdiag()[j] * J.offdiag()[j];
    }
    for (int j = 1; j <= n - 1; ++j) {
        double target = (n - j) * beta / 2.0;
        double se = target * std::sqrt(2.0 / reps);  // Gam(k) variance ~ k
        CHECK(std::fabs(m2[j - 1] / reps - target) < 5.0 * se + 0.005);
    }
}

TEST_CASE("sample_iid moments") {
    randsrc::RandomStream s(4, 0);
    auto J1 = jacobi::sample_iid(1, 1.0, s);
    CHECK(J1.size() == 1);

    const int reps = 2'000, n = 50;
    double b2 = 0.0, tr = 0.0;
    for (int r = 0; r < reps; ++r) {
        auto J = jacobi::sample_iid(n, 1.0, s);
        double t = 0.0;
        for (double a : J.diag()) t += a * a;
        for (double b : J.offdiag()) {
            t += 2.0 * b * b;
            b2 += b * b;
        }
        tr += t / n;
    }
    CHECK(std::fabs(b2 / (reps * (n - 1)) - 1.0) < 0.01);
    CHECK(std::fabs(tr / reps - (1.0 + 2.0 * (n - 1.0) / n)) < 0.05);
}

TEST_CASE("associated_hermite entries") {
    auto J = jacobi::associated_hermite(2, 0.0);
    CHECK(J.diag()[0] == 0.0);
    CHECK(J.diag()[1] == 0.0);
    CHECK(J.offdiag()[0] == doctest::Approx(1.0));

    auto J3 = jacobi::associated_hermite(3, 1.0);
    CHECK(J3.offdiag()[0] == doctest::Approx(std::sqrt(2.0)));
    CHECK(J3.offdiag()[1] == doctest::Approx(std::sqrt(3.0)));

    // (J^2)(1,1) = b_1^2 = alpha + 1 matches the second moment of the limit law.
    for (double alpha : {0.0, 0.7, 3.0}) {
        auto M = jacobi::associated_hermite(5, alpha);
        CHECK(M.offdiag()[0] * M.offdiag()[0] == doctest::Approx(alpha + 1.0));
    }

    // Offdiagonals strictly increasing in k.
    auto big = jacobi::associated_hermite(50, 0.3);
    for (std::size_t k = 1; k < big.offdiag().size(); ++k)
        CHECK(big.offdiag()[k] > big.offdiag()[k - 1]);
}

TEST_CASE("restriction") {
    randsrc::RandomStream s(6, 0);
    auto J = jacobi::sample_iid(6, 1.0, s);
    auto full = jacobi::restriction(J, 1, 6);
    CHECK(full.diag() == J.diag());
    CHECK(full.offdiag() == J.offdiag());

    auto single = jacobi::restriction(J, 3, 3);
    CHECK(single.size() == 1);
    CHECK(single.diag()[0] == J.diag()[2]);

    CHECK_THROWS_AS(jacobi::restriction(J, 0, 3), std::out_of_range);
    CHECK_THROWS_AS(jacobi::restriction(J, 4, 2), std::out_of_range);
    CHECK_THROWS_AS(jacobi::restriction(J, 2, 7), std::out_of_range);
}

TEST_CASE("restriction eigenvalues interlace (Cauchy)") {
    randsrc::RandomStream s(7, 0);
    for (int rep = 0; rep < 20; ++rep) {
        auto J = jacobi::sample_gbe(6, 1.0, s);
        auto outer = eig::dense_eig_oracle(J);
        auto inner = eig::dense_eig_oracle(jacobi::restriction(J, 1, 5));
        for (std::size_t k = 0; k < inner.size(); ++k) {
            CHECK(outer[k] <= inner[k] + 1e-12);
            CHECK(inner[k] <= outer[k + 1] + 1e-12);
        }
    }
}

TEST_CASE("csv serialization") {
    JacobiMatrix J({1.5, -2.0, 0.25}, {0.5, 3.0});
    std::ostringstream os;
    jacobi::write_csv(J, os);
    CHECK(os.str() == "diag,offdiag\n1.5,0.5\n-2,3\n0.25,\n");
}
