#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "gbe/random.hpp"
#include "oracles.hpp"

using namespace gbe::randsrc;

namespace {

struct Moments {
    double mean, var;
};

template <typename Draw>
Moments sample_moments(std::size_t n, Draw draw) {
    double s = 0.0, s2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double x = draw();
        s += x;
        s2 += x * x;
    }
    double mean = s / n;
    return {mean, s2 / n - mean * mean};
}

} // namespace

TEST_CASE("streams replay bit-identically and are stream-index separated") {
    RandomStream a(1, 0), b(1, 0), c(1, 1);
    for (int i = 0; i < 1000; ++i) {
        CHECK(a.next_u64() == b.next_u64());
    }
    RandomStream a2(1, 0);
    bool any_diff = false;
    for (int i = 0; i < 1000; ++i) any_diff |= (a2.next_u64() != c.next_u64());
    CHECK(any_diff);

    // Frozen replay pin: first normal draw of (seed=1, index=0).
    RandomStream pin(1, 0);
    CHECK(normal(pin) == 0.29258166166871358);
}

TEST_CASE("normal moments") {
    RandomStream s(42, 0);
    auto m = sample_moments(1'000'000, [&] { return normal(s); });
    CHECK(std::fabs(m.mean) < 0.005);
    CHECK(std::fabs(m.var - 1.0) < 0.01);
}

TEST_CASE("independent streams are uncorrelated") {
    RandomStream s0(7, 0), s1(7, 1);
    const std::size_t n = 100'000;
    double sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) sxy += normal(s0) * normal(s1);
    CHECK(std::fabs(sxy / n) < 0.015);
}

TEST_CASE("substreams replay deterministically and stay uncorrelated") {
    RandomStream base(11, 3);
    RandomStream a = base.substream(1), a2 = base.substream(1), b = base.substream(2);
    for (int i = 0; i < 200; ++i) CHECK(a.next_u64() == a2.next_u64());
    double sxy = 0.0;
    const std::size_t n = 50'000;
    RandomStream c = base.substream(1);
    for (std::size_t i = 0; i < n; ++i) sxy += normal(c) * normal(b);
    CHECK(std::fabs(sxy / n) < 0.02);
}

TEST_CASE("gamma moments") {
    RandomStream s(12, 0);
    auto m2 = sample_moments(1'000'000, [&] { return gamma(2.0, s); });
    CHECK(std::fabs(m2.mean - 2.0) < 0.01);

    RandomStream s2(12, 1);
    auto msmall = sample_moments(1'000'000, [&] { return gamma(0.05, s2); });
    CHECK(std::fabs(msmall.mean - 0.05) < 0.002);

    CHECK_THROWS_AS(gamma(0.0, s), std::invalid_argument);
    CHECK_THROWS_AS(gamma(-1.0, s), std::invalid_argument);
}

TEST_CASE("gamma(0.5) variance against the inverse-CDF oracle") {
    RandomStream s(13, 0);
    auto m = sample_moments(1'000'000, [&] { return gamma(0.5, s); });
    CHECK(std::fabs(m.var - 0.5) < 0.01);

    // Independent sampler: quantile transform of uniforms.
    RandomStream u(13, 1);
    std::vector<double> oracle(10'000), mine(10'000);
    for (auto& x : oracle) x = oracles::gamma_quantile(0.5, u.uniform01());
    RandomStream v(13, 2);
    for (auto& x : mine) x = gamma(0.5, v);
    double om = 0, ov = 0;
    for (double x : oracle) om += x;
    om /= oracle.size();
    for (double x : oracle) ov += (x - om) * (x - om);
    ov /= oracle.size();
    CHECK(std::fabs(ov - 0.5) < 0.06);  // 3 se at 1e4 draws

    double d = oracles::ks_two_sample(oracle, mine);
    CHECK(d < oracles::ks_two_sample_crit_1pct(oracle.size(), mine.size()));
}

TEST_CASE("gamma additivity: gamma(a) + gamma(b) ~ gamma(a+b)") {
    RandomStream s1(99, 0), s2(99, 1), s3(99, 2);
    std::vector<double> sum(10'000), direct(10'000);
    for (std::size_t i = 0; i < sum.size(); ++i) sum[i] = gamma(0.7, s1) + gamma(1.8, s2);
    for (auto& x : direct) x = gamma(2.5, s3);
    double d = oracles::ks_two_sample(sum, direct);
    CHECK(d < oracles::ks_two_sample_crit_1pct(sum.size(), direct.size()));
}

TEST_CASE("chi_tilde second moment is dof/2") {
    RandomStream s(5, 0);
    auto m = sample_moments(1'000'000, [&] {
        double x = chi_tilde(2.0, s);
        return x * x;
    });
    CHECK(std::fabs(m.mean - 1.0) < 0.01);

    RandomStream s2(5, 1);
    auto msmall = sample_moments(200'000, [&] {
        double x = chi_tilde(0.02, s2);
        return x * x;
    });
    CHECK(std::fabs(msmall.mean - 0.01) < 0.001);

    CHECK_THROWS_AS(chi_tilde(0.0, s), std::invalid_argument);
}

TEST_CASE("tiny-shape gamma clamps to the smallest positive normal and counts") {
    reset_underflow_clamp_count();
    RandomStream s(3, 0);
    double lo = 1.0;
    for (int i = 0; i < 20'000; ++i) {
        double x = gamma(1e-3, s);
        CHECK(x > 0.0);
        lo = std::min(lo, x);
    }
    CHECK(underflow_clamp_count() > 0);
    CHECK(lo >= std::numeric_limits<double>::min());
    reset_underflow_clamp_count();
}

TEST_CASE("dirichlet weights") {
    RandomStream s(21, 0);
    auto one = dirichlet(1, 0.5, s);
    REQUIRE(one.size() == 1);
    CHECK(one[0] == doctest::Approx(1.0));

    double mean[4] = {0, 0, 0, 0};
    const int reps = 100'000;
    for (int r = 0; r < reps; ++r) {
        auto w = dirichlet(4, 0.5, s);
        double total = 0.0;
        for (int i = 0; i < 4; ++i) {
            mean[i] += w[i];
            total += w[i];
        }
        CHECK(std::fabs(total - 1.0) < 1e-12);
    }
    for (int i = 0; i < 4; ++i) CHECK(std::fabs(mean[i] / reps - 0.25) < 0.005);

    CHECK_THROWS_AS(dirichlet(0, 1.0, s), std::invalid_argument);
    CHECK_THROWS_AS(dirichlet(2, 0.0, s), std::invalid_argument);
}

TEST_CASE("dirichlet(2, 1) first coordinate is uniform") {
    RandomStream s(22, 0);
    std::vector<double> xs(10'000);
    for (auto& x : xs) x = dirichlet(2, 1.0, s)[0];
    std::sort(xs.begin(), xs.end());
    double d = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        double f = xs[i];  // uniform CDF
        d = std::max(d, std::fabs(f - static_cast<double>(i + 1) / xs.size()));
        d = std::max(d, std::fabs(f - static_cast<double>(i) / xs.size()));
    }
    // 1% asymptotic critical value 1.628 / sqrt(m)
    CHECK(d < 1.628 / std::sqrt(static_cast<double>(xs.size())));
}
