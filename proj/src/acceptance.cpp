#include "gbe/acceptance.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "gbe/density.hpp"
#include "gbe/harness.hpp"
#include "gbe/jacobi.hpp"
#include "gbe/parallel.hpp"
#include "gbe/random.hpp"
#include "gbe/stats.hpp"
#include "gbe/tridiag.hpp"

namespace gbe::acceptance {

namespace {

using randsrc::RandomStream;

std::string num(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

// 1. Bisection eigenvalues and orthonormal-polynomial weights against the
//    dense rotation oracle on 200 small random matrices.
CriterionResult c1_eigensolver(const Options& o) {
    CriterionResult r;
    double worst_eig = 0.0, worst_w = 0.0;
    RandomStream stream(o.seed, 901);
    for (int i = 0; i < 200; ++i) {
        std::size_t n = 1 + (stream.next_u64() % 8);
        bool gbe_model = (i % 2 == 0);
        auto J = gbe_model
                     ? jacobi::sample_gbe(n, 0.5 + 1.5 * stream.uniform01(), stream)
                     : jacobi::sample_iid(n, 0.3 + 1.7 * stream.uniform01(), stream);
        auto eigs = eig::eigenvalues(J);
        auto oracle = eig::dense_spectral_oracle(J);
        for (std::size_t k = 0; k < n; ++k)
            worst_eig = std::max(worst_eig, std::fabs(eigs[k] - oracle.eigenvalues[k]));
        auto w = eig::spectral_weights(J, eigs);
        for (std::size_t k = 0; k < n; ++k)
            worst_w = std::max(worst_w, std::fabs(w[k] - oracle.weights[k]));
    }
    r.pass = worst_eig < 1e-10 && worst_w < 1e-8;
    r.detail = "max |eig err| " + num(worst_eig) + ", max |weight err| " + num(worst_w);
    return r;
}

// 2. Density cross-validation: quadrature density against the truncated
//    continued fraction, normalization, and the closed-form anchor at
//    (alpha, E) = (1, 0). The truncation is run at N = 4e7 where the atom
//    spacing pi/sqrt(N) sits safely below eta; at the nominal N = 5000 the
//    continued fraction resolves individual eigenvalue atoms and the value is
//    unusable (reported for reference).
CriterionResult c2_density(const Options& o) {
    CriterionResult r;
    const double alphas[3] = {0.5, 1.0, 2.0};
    const long long big_n = 40'000'000;
    const double eta = 1e-3;

    std::vector<double> grid;
    for (double e = -4.0; e <= 4.0 + 1e-12; e += 0.25) grid.push_back(e);

    double sup = 0.0;
    for (double a : alphas) {
        std::vector<double> gap(grid.size());
        parallel_for(grid.size(), o.workers, [&](std::size_t i) {
            double d = density::dos(a, grid[i]);
            double dt = density::dos_via_truncation(a, grid[i], big_n, eta);
            gap[i] = std::fabs(d - dt);
        });
        for (double g : gap) sup = std::max(sup, g);
    }

    double worst_norm = 0.0;
    for (double a : alphas) worst_norm = std::max(worst_norm, std::fabs(density::dos_normalization(a) - 1.0));

    const double anchor = 2.0 / (M_PI * std::sqrt(2.0 * M_PI));
    double anchor_err = std::fabs(density::dos(1.0, 0.0) - anchor);
    double nominal = density::dos_via_truncation(1.0, 0.0, 5000, eta);

    r.pass = sup < 5e-3 && worst_norm < 1e-6 && anchor_err < 1e-7;
    r.detail = "sup|dos-trunc(N=4e7)| " + num(sup) + ", |int dos - 1| " + num(worst_norm) +
               ", anchor err " + num(anchor_err) + " (nominal N=5000 gives " + num(nominal) +
               ", atom-resolved)";
    return r;
}

// 3. theta_E / dos identity on the same grid.
CriterionResult c3_theta(const Options& o) {
    CriterionResult r;
    const double alphas[3] = {0.5, 1.0, 2.0};
    std::vector<double> grid;
    for (double e = -4.0; e <= 4.0 + 1e-12; e += 0.25) grid.push_back(e);
    double sup = 0.0;
    for (double a : alphas) {
        std::vector<double> err(grid.size());
        parallel_for(grid.size(), o.workers, [&](std::size_t i) {
            err[i] = std::fabs(density::theta_e(a, grid[i]) / density::dos(a, grid[i]) - 1.0);
        });
        for (double e : err) sup = std::max(sup, e);
    }
    r.pass = sup < 1e-3;
    r.detail = "sup |theta/dos - 1| " + num(sup);
    return r;
}

// 4. Exact CLT anchor: f(x) = x is exactly N(0,1) for every n.
CriterionResult c4_clt_exact(const Options& o) {
    CriterionResult r;
    auto s = stats::clt_experiment(200, 1.0, stats::monomial(1), 20000, o.seed, o.workers);
    bool var_ok = std::fabs(s.variance - 1.0) <= 3.0 * s.variance_se;
    bool skew_ok = std::fabs(s.skewness) < 0.05;
    bool kurt_ok = std::fabs(s.excess_kurtosis) < 0.1;
    r.pass = var_ok && skew_ok && kurt_ok;
    r.detail = "variance " + num(s.variance) + " (se " + num(s.variance_se) + "), skew " +
               num(s.skewness) + ", exkurt " + num(s.excess_kurtosis);
    return r;
}

stats::CltSummary g_c5_summary;  // shared with criterion 6

// 5. Derived CLT anchor: f(x) = x^2 with the entry-variance target and the
//    derivative-square variance bound; normality by KS at 1%.
CriterionResult c5_clt_x2(const Options& o) {
    CriterionResult r;
    const std::size_t n = 200;
    auto s = stats::clt_experiment(n, 1.0, stats::monomial(2), 20000, o.seed, o.workers);
    g_c5_summary = s;
    double target = 2.0 + 2.0 * static_cast<double>(n - 1) / static_cast<double>(n);
    bool var_ok = std::fabs(s.variance - target) <= 3.0 * s.variance_se;
    bool bound_ok = s.variance <= s.ge_bound + 3.0 * s.variance_se;
    bool ks_ok = s.ks_p > 0.01;
    r.pass = var_ok && bound_ok && ks_ok;
    r.detail = "n Var " + num(s.variance) + " target " + num(target) + ", bound " +
               num(s.ge_bound) + ", KS p " + num(s.ks_p);
    return r;
}

// 6. Variance identity sigma_p^2 = int_0^1 sigma_p^2(u alpha) du for p = x^2.
CriterionResult c6_sigma2(const Options& o) {
    CriterionResult r;
    auto rhs = stats::sigma2_integral(1.0, stats::monomial(2), 11, 500, 5000, o.seed + 77,
                                      o.workers);
    const auto& lhs = g_c5_summary;
    double band = 3.0 * std::sqrt(rhs.se * rhs.se + lhs.variance_se * lhs.variance_se);
    bool agree = std::fabs(rhs.value - lhs.variance) <= band;
    bool anchor = std::fabs(rhs.value - 4.0) <= 3.0 * rhs.se;
    r.pass = agree && anchor;
    r.detail = "lhs " + num(lhs.variance) + ", rhs " + num(rhs.value) + " (se " + num(rhs.se) +
               "), band " + num(band);
    return r;
}

// 7. Local law at the microscopic scale: E[xi_n(f_zeta)] vs pi mu(E) and the
//    histogram density at bin 0.5/n.
CriterionResult c7_local_law(const Options& o) {
    CriterionResult r;
    const std::size_t n = 2000, replicas = 10000;
    auto sampler = stats::gbe_sampler(n, 1.0);
    std::vector<double> xi(replicas);
    parallel_for(replicas, o.workers, [&](std::size_t rr) {
        RandomStream stream(o.seed, rr);
        auto J = sampler(stream);
        xi[rr] = stats::xi_f_zeta_resolvent(J, 0.0, {0.0, 1.0});
    });
    double xi_mean = pairwise_mean(xi);
    double dos0 = density::dos(1.0, 0.0);
    auto dens = stats::mean_density_estimate(sampler, 0.0, 0.5 / static_cast<double>(n), replicas,
                                             o.seed + 1, o.workers);
    bool xi_ok = std::fabs(xi_mean / (M_PI * dos0) - 1.0) < 0.05;
    bool dens_ok = std::fabs(dens.value / dos0 - 1.0) < 0.05;
    r.pass = xi_ok && dens_ok;
    r.detail = "E[xi] " + num(xi_mean) + " vs pi dos " + num(M_PI * dos0) + "; density " +
               num(dens.value) + " vs dos " + num(dos0);
    return r;
}

// 8. Poisson bulk statistics at (n, alpha, E) = (2000, 1, 0).
CriterionResult c8_poisson(const Options& o) {
    CriterionResult r;
    const std::size_t n = 2000, replicas = 5000;
    const double W = 10.0;
    const double beta = 2.0 / static_cast<double>(n);
    std::vector<stats::LocalProcessSample> samples(replicas);
    parallel_for(replicas, o.workers, [&](std::size_t rr) {
        RandomStream stream(o.seed, rr);
        auto J = jacobi::sample_gbe(n, beta, stream);
        samples[rr] = stats::local_process_matrix(J, 0.0, W);
    });
    const double theta = density::dos(1.0, 0.0);
    auto d = stats::poisson_diagnostics(samples, theta, {{-2.0, 0.0}, {0.0, 2.0}});

    double target = 2.0 * theta;
    bool mean_ok = true, ratio_ok = true;
    for (const auto& iv : d.intervals) {
        mean_ok = mean_ok && std::fabs(iv.count_mean - target) <= 0.04 * target;
        ratio_ok = ratio_ok && iv.var_mean_ratio >= 0.9 && iv.var_mean_ratio <= 1.1;
    }
    bool cov_ok = std::fabs(d.cross_covariance) <= 3.0 * d.cross_covariance_se;
    bool ks_ok = d.gap_ks_p > 0.01;
    r.pass = mean_ok && ratio_ok && cov_ok && ks_ok;
    r.detail = "means " + num(d.intervals[0].count_mean) + "/" + num(d.intervals[1].count_mean) +
               " target " + num(target) + ", var/mean " + num(d.intervals[0].var_mean_ratio) +
               "/" + num(d.intervals[1].var_mean_ratio) + ", cov " + num(d.cross_covariance) +
               ", gap KS p " + num(d.gap_ks_p);
    return r;
}

// 9. Wegner bound at z = 0.5 + 0.01i.
CriterionResult c9_wegner(const Options& o) {
    CriterionResult r;
    auto wr = stats::wegner_check(stats::gbe_sampler(200, 1.0), {0.5, 0.01}, 10000, o.seed,
                                  o.workers);
    r.pass = wr.pass;
    r.detail = "max E[Im G] " + num(wr.estimate) + " (se " + num(wr.estimate_se) + ") vs bound " +
               num(wr.bound);
    return r;
}

// 10. Minami quadratic scaling: P(>=2) ratio between |I| = 1 and |I| = 1/2.
CriterionResult c10_minami(const Options& o) {
    CriterionResult r;
    auto mr = stats::minami_check(stats::gbe_sampler(2048, 1.0), 0.0, 1.0, 64, 100000,
                                  o.seed + 31, o.workers);
    r.pass = mr.ratio >= 3.0 && mr.ratio <= 5.0;
    r.detail = "P(>=2): " + num(mr.rows[0].p_ge2) + " vs " + num(mr.rows[1].p_ge2) + ", ratio " +
               num(mr.ratio) + " (se " + num(mr.ratio_se) + ")";
    return r;
}

// 11. Exponential decay of fractional Green's-function moments.
CriterionResult c11_decay(const Options& o) {
    CriterionResult r;
    auto fit = stats::green_decay(stats::gbe_sampler(400, 1.0), {0.0, 0.001}, 0.2, 10000, 100,
                                  o.seed, o.workers);
    r.pass = fit.slope < 0.0 && fit.r2 > 0.95;
    r.detail = "slope " + num(fit.slope) + ", R^2 " + num(fit.r2) + ", gamma_s " +
               num(fit.gamma_s);
    return r;
}

// 12. Determinism: identical (config, seed) with different worker counts must
//     produce byte-identical CSV tables.
CriterionResult c12_determinism(const Options& o) {
    CriterionResult r;
    harness::ExperimentConfig dos;
    dos.experiment = "dos-table";
    dos.alpha = {1.0};
    dos.emin = -1.0;
    dos.emax = 1.0;
    dos.estep = 0.5;
    dos.trunc_n = 200000;
    dos.seed = o.seed;

    harness::ExperimentConfig clt;
    clt.experiment = "clt";
    clt.alpha = {1.0};
    clt.n = 50;
    clt.replicas = 400;
    clt.f = "x2";
    clt.seed = o.seed;

    bool ok = true;
    for (auto* cfg : {&dos, &clt}) {
        cfg->workers = 1;
        auto t1 = harness::run_experiment(*cfg, false);
        cfg->workers = 8;
        auto t8 = harness::run_experiment(*cfg, false);
        ok = ok && t1.size() == t8.size();
        for (std::size_t i = 0; ok && i < t1.size(); ++i)
            ok = harness::to_csv(t1[i]) == harness::to_csv(t8[i]);
    }
    r.pass = ok;
    r.detail = ok ? "CSV bytes identical for workers 1 vs 8" : "CSV bytes differ";
    return r;
}

} // namespace

std::vector<CriterionResult> run_all(const Options& opts, std::ostream& os) {
    struct Entry {
        int id;
        const char* name;
        CriterionResult (*fn)(const Options&);
    };
    const Entry runners[] = {{1, "eigensolver-oracle-equivalence", c1_eigensolver},
                             {2, "density-cross-validation", c2_density},
                             {3, "theta-intensity-identity", c3_theta},
                             {4, "clt-exact-anchor-f=x", c4_clt_exact},
                             {5, "clt-derived-anchor-f=x2", c5_clt_x2},
                             {6, "variance-identity-sigma2", c6_sigma2},
                             {7, "local-law", c7_local_law},
                             {8, "bulk-poisson-statistics", c8_poisson},
                             {9, "wegner-bound", c9_wegner},
                             {10, "minami-quadratic-scaling", c10_minami},
                             {11, "green-function-decay", c11_decay},
                             {12, "worker-count-determinism", c12_determinism}};
    std::vector<CriterionResult> results;
    for (const auto& entry : runners) {
        auto start = std::chrono::steady_clock::now();
        CriterionResult r;
        try {
            r = entry.fn(opts);
        } catch (const std::exception& e) {
            r.pass = false;
            r.detail = std::string("exception: ") + e.what();
        }
        auto stop = std::chrono::steady_clock::now();
        r.seconds = std::chrono::duration_cast<std::chrono::milliseconds>(stop - start).count() / 1e3;
        r.id = entry.id;
        r.name = entry.name;
        char line[512];
        std::snprintf(line, sizeof line, "%s  %2d %-32s %s  [%.1fs]\n",
                      r.pass ? "PASS" : "FAIL", r.id, r.name.c_str(), r.detail.c_str(), r.seconds);
        os << line;
        os.flush();
        results.push_back(std::move(r));
    }
    std::size_t passed = 0;
    for (const auto& r : results) passed += r.pass;
    os << passed << "/" << results.size() << " acceptance criteria passed\n";
    return results;
}

bool all_passed(const std::vector<CriterionResult>& results) {
    for (const auto& r : results)
        if (!r.pass) return false;
    return !results.empty();
}

} // namespace gbe::acceptance
