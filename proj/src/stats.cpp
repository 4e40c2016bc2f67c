#include "gbe/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "gbe/common.hpp"
#include "gbe/parallel.hpp"

namespace gbe::stats {

MatrixSampler gbe_sampler(std::size_t n, double alpha) {
    double beta = 2.0 * alpha / static_cast<double>(n);
    return [n, beta](RandomStream& s) { return jacobi::sample_gbe(n, beta, s); };
}

MatrixSampler iid_sampler(std::size_t n, double alpha) {
    return [n, alpha](RandomStream& s) { return jacobi::sample_iid(n, alpha, s); };
}

// ---------------------------------------------------------------------------

TestFunction monomial(int k) {
    if (k < 0 || k > 6) throw std::invalid_argument("monomial: degree must be in [0, 6]");
    TestFunction t;
    t.id = (k == 0) ? "1" : (k == 1 ? "x" : "x" + std::to_string(k));
    t.f = [k](double x) { return std::pow(x, k); };
    t.df = [k](double x) { return k == 0 ? 0.0 : k * std::pow(x, k - 1); };
    t.monomial_degree = k;
    return t;
}

TestFunction capped_log(double E, double M) {
    TestFunction t;
    t.id = "capped_log";
    t.f = [E, M](double x) { return std::max(std::log(std::fabs(E - x)), -M); };
    t.df = [E, M](double x) {
        double d = x - E;
        if (std::fabs(d) <= std::exp(-M)) return 0.0;
        return 1.0 / d;
    };
    return t;
}

TestFunction test_function_by_id(const std::string& id) {
    if (id == "1") return monomial(0);
    if (id == "x") return monomial(1);
    if (id.size() == 2 && id[0] == 'x' && id[1] >= '2' && id[1] <= '6')
        return monomial(id[1] - '0');
    throw std::invalid_argument("unknown test function id: " + id);
}

// ---------------------------------------------------------------------------

double linear_stat(const std::vector<double>& eigs, const TestFunction& f) {
    std::vector<double> vals(eigs.size());
    for (std::size_t i = 0; i < eigs.size(); ++i) vals[i] = f.f(eigs[i]);
    return pairwise_mean(vals);
}

double moment_trace(const JacobiMatrix& J, int k) {
    if (k < 0 || k > 12) throw std::invalid_argument("moment_trace: degree must be in [0, 12]");
    if (k == 0) return 1.0;
    const std::size_t n = J.size();
    const auto& a = J.diag();
    const auto& b = J.offdiag();
    std::vector<double> v(2 * k + 1), w(2 * k + 1);
    std::vector<double> diag_sum(n, 0.0);
    double total = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        // Window [j-k, j+k] clipped to [0, n); J^k e_j never leaves it.
        std::size_t lo = (j >= static_cast<std::size_t>(k)) ? j - k : 0;
        std::size_t hi = std::min(n - 1, j + k);
        std::size_t width = hi - lo + 1;
        std::fill(v.begin(), v.begin() + width, 0.0);
        v[j - lo] = 1.0;
        for (int step = 0; step < k; ++step) {
            for (std::size_t i = 0; i < width; ++i) {
                std::size_t g = lo + i;
                double acc = a[g] * v[i];
                if (i > 0) acc += b[g - 1] * v[i - 1];
                if (i + 1 < width) acc += b[g] * v[i + 1];
                w[i] = acc;
            }
            std::swap(v, w);
        }
        diag_sum[j] = v[j - lo];
    }
    total = pairwise_sum(diag_sum);
    return total / static_cast<double>(n);
}

double linear_stat_matrix(const JacobiMatrix& J, const TestFunction& f) {
    if (f.monomial_degree >= 0) return moment_trace(J, f.monomial_degree);
    return linear_stat(eig::eigenvalues(J), f);
}

// ---------------------------------------------------------------------------

namespace {

// Runs fn once per replica with the replica's own stream. A replica throwing
// precision_error is recorded as skipped; the run aborts when skips exceed
// 0.1% of the replicas.
std::size_t run_replicas(std::size_t replicas, unsigned workers, std::uint64_t seed,
                         std::vector<char>& ok,
                         const std::function<void(std::size_t, RandomStream&)>& fn) {
    ok.assign(replicas, 1);
    parallel_for(replicas, workers, [&](std::size_t r) {
        RandomStream stream(seed, r);
        try {
            fn(r, stream);
        } catch (const precision_error&) {
            ok[r] = 0;
        }
    });
    std::size_t skipped = 0;
    for (char c : ok) skipped += (c == 0);
    if (skipped * 1000 > replicas)
        throw precision_error("more than 0.1% of replicas failed numerically");
    return skipped;
}

std::vector<double> compact(const std::vector<double>& xs, const std::vector<char>& ok) {
    std::vector<double> out;
    out.reserve(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i)
        if (ok[i]) out.push_back(xs[i]);
    return out;
}

double sample_variance_se(const CentralMoments& m, std::size_t n) {
    // Var(sample variance) ~ (mu4 - mu2^2)/n.
    double v = (m.m4 - m.m2 * m.m2) / static_cast<double>(n);
    return v > 0 ? std::sqrt(v) : 0.0;
}

// <L_n, (f')^2> for one matrix.
double derivative_square_stat(const JacobiMatrix& J, const TestFunction& f) {
    if (f.monomial_degree >= 1) {
        int k = f.monomial_degree;
        return static_cast<double>(k) * k * moment_trace(J, 2 * k - 2);
    }
    if (f.monomial_degree == 0) return 0.0;
    auto eigs = eig::eigenvalues(J);
    std::vector<double> vals(eigs.size());
    for (std::size_t i = 0; i < eigs.size(); ++i) {
        double d = f.df(eigs[i]);
        vals[i] = d * d;
    }
    return pairwise_mean(vals);
}

} // namespace

CltSummary clt_experiment(std::size_t n, double alpha, const TestFunction& f,
                          std::size_t replicas, std::uint64_t seed, unsigned workers) {
    if (replicas < 2) throw std::invalid_argument("clt_experiment: need at least 2 replicas");
    const double beta = 2.0 * alpha / static_cast<double>(n);
    std::vector<double> stat(replicas), dstat(replicas);
    std::vector<char> ok;
    std::size_t skipped =
        run_replicas(replicas, workers, seed, ok, [&](std::size_t r, RandomStream& stream) {
            JacobiMatrix J = jacobi::sample_gbe(n, beta, stream);
            stat[r] = linear_stat_matrix(J, f);
            dstat[r] = derivative_square_stat(J, f);
        });
    stat = compact(stat, ok);
    dstat = compact(dstat, ok);
    const std::size_t used = stat.size();

    CltSummary out;
    out.f_id = f.id;
    out.replicas = used;
    out.skipped = skipped;
    const double sqn = std::sqrt(static_cast<double>(n));
    double mean_stat = pairwise_mean(stat);

    std::vector<double> centered(used);
    for (std::size_t r = 0; r < used; ++r) centered[r] = sqn * (stat[r] - mean_stat);
    auto m = central_moments(centered, 0.0);

    out.mean = mean_stat;
    out.mean_se = std::sqrt(m.m2 / static_cast<double>(n) / static_cast<double>(used));
    out.variance = m.m2 * static_cast<double>(used) / static_cast<double>(used - 1);
    out.variance_se = sample_variance_se(m, used);
    double sd = std::sqrt(m.m2);
    out.skewness = m.m3 / (sd * sd * sd);
    out.excess_kurtosis = m.m4 / (m.m2 * m.m2) - 3.0;
    out.ge_bound = pairwise_mean(dstat);

    std::vector<double> standardized(used);
    for (std::size_t r = 0; r < used; ++r) standardized[r] = centered[r] / sd;
    auto ks = ks_statistic(standardized, [](double x) { return standard_normal_cdf(x); });
    out.ks_stat = ks.statistic;
    out.ks_p = ks.p_value;
    return out;
}

VarianceEstimate sigma2_iid(double alpha, const TestFunction& p, std::size_t n,
                            std::size_t replicas, std::uint64_t seed, unsigned workers) {
    if (replicas < 2) throw std::invalid_argument("sigma2_iid: need at least 2 replicas");
    std::vector<double> stat(replicas);
    std::vector<char> ok;
    std::size_t skipped;
    if (alpha == 0.0) {
        // Degenerate i.i.d. model: zero subdiagonal, i.e. a diagonal matrix of
        // standard normals.
        skipped = run_replicas(replicas, workers, seed, ok, [&](std::size_t r, RandomStream& stream) {
            std::vector<double> vals(n);
            for (auto& v : vals) v = p.f(randsrc::normal(stream));
            stat[r] = pairwise_mean(vals);
        });
    } else {
        skipped = run_replicas(replicas, workers, seed, ok, [&](std::size_t r, RandomStream& stream) {
            JacobiMatrix J = jacobi::sample_iid(n, alpha, stream);
            stat[r] = linear_stat_matrix(J, p);
        });
    }
    stat = compact(stat, ok);
    double mean = pairwise_mean(stat);
    auto m = central_moments(stat, mean);
    double nn = static_cast<double>(n);
    VarianceEstimate out;
    out.value = nn * m.m2 * static_cast<double>(stat.size()) / static_cast<double>(stat.size() - 1);
    out.se = nn * sample_variance_se(m, stat.size());
    out.skipped = skipped;
    return out;
}

VarianceEstimate sigma2_integral(double alpha, const TestFunction& p, std::size_t grid_size,
                                 std::size_t n, std::size_t replicas, std::uint64_t seed,
                                 unsigned workers) {
    if (grid_size < 2) throw std::invalid_argument("sigma2_integral: grid_size must be >= 2");
    double integral = 0.0, var = 0.0;
    for (std::size_t i = 0; i < grid_size; ++i) {
        double u = static_cast<double>(i) / static_cast<double>(grid_size - 1);
        double w = (i == 0 || i + 1 == grid_size) ? 0.5 : 1.0;
        w /= static_cast<double>(grid_size - 1);
        auto node = sigma2_iid(u * alpha, p, n, replicas, seed + 0x9E37 * (i + 1), workers);
        integral += w * node.value;
        var += w * w * node.se * node.se;
    }
    return {integral, std::sqrt(var), 0};
}

// ---------------------------------------------------------------------------

LocalProcessSample local_process(const std::vector<double>& eigs, std::size_t n, double E,
                                 double W) {
    if (!(W > 0.0)) throw std::invalid_argument("local_process: window must be positive");
    LocalProcessSample s;
    s.reference_energy = E;
    s.window = W;
    s.n = n;
    double nn = static_cast<double>(n);
    for (double lam : eigs) {
        double p = nn * (lam - E);
        if (std::fabs(p) <= W) s.points.push_back(p);
    }
    std::sort(s.points.begin(), s.points.end());
    return s;
}

LocalProcessSample local_process_matrix(const JacobiMatrix& J, double E, double W) {
    if (!(W > 0.0)) throw std::invalid_argument("local_process_matrix: window must be positive");
    double nn = static_cast<double>(J.size());
    double margin = (W + 5.0) / nn;
    auto eigs = eig::eigenvalues_in_interval(J, E - margin, E + margin);
    return local_process(eigs, J.size(), E, W);
}

double xi_f_zeta(const std::vector<double>& eigs, std::size_t n, double E, cplx zeta) {
    if (!(zeta.imag() > 0.0)) throw std::domain_error("xi_f_zeta: need Im zeta > 0");
    const double sigma = zeta.real(), tau = zeta.imag();
    const double nn = static_cast<double>(n);
    std::vector<double> vals(eigs.size());
    for (std::size_t j = 0; j < eigs.size(); ++j) {
        double x = nn * (eigs[j] - E) - sigma;
        vals[j] = tau / (x * x + tau * tau);
    }
    return pairwise_sum(vals);
}

double xi_f_zeta_resolvent(const JacobiMatrix& J, double E, cplx zeta) {
    if (!(zeta.imag() > 0.0)) throw std::domain_error("xi_f_zeta_resolvent: need Im zeta > 0");
    cplx z = E + zeta / static_cast<double>(J.size());
    return eig::resolvent_trace(J, z).imag() / static_cast<double>(J.size());
}

// ---------------------------------------------------------------------------

double window_gap_cdf(double g, double theta, double window_length) {
    if (g <= 0.0) return 0.0;
    if (g >= window_length) return 1.0;
    auto a = [&](double x) {
        double e = std::exp(-theta * x);
        return window_length * (1.0 - e) / theta - (1.0 - e * (1.0 + theta * x)) / (theta * theta);
    };
    return a(g) / a(window_length);
}

PoissonDiagnostics poisson_diagnostics(const std::vector<LocalProcessSample>& samples,
                                       double theta, const std::vector<Interval>& intervals) {
    if (samples.empty()) throw std::invalid_argument("poisson_diagnostics: no samples");
    if (!(theta > 0.0)) throw std::invalid_argument("poisson_diagnostics: theta must be positive");
    auto sorted = intervals;
    std::sort(sorted.begin(), sorted.end(), [](auto& a, auto& b) { return a.lo < b.lo; });
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        if (!(sorted[i].lo <= sorted[i].hi) || !std::isfinite(sorted[i].lo) ||
            !std::isfinite(sorted[i].hi))
            throw std::invalid_argument("poisson_diagnostics: malformed interval");
        if (i > 0 && sorted[i].lo < sorted[i - 1].hi)
            throw std::invalid_argument("poisson_diagnostics: intervals overlap");
    }

    const std::size_t R = samples.size();
    PoissonDiagnostics out;
    out.theta = theta;
    out.counts.assign(intervals.size(), std::vector<std::uint32_t>(R, 0));

    for (std::size_t r = 0; r < R; ++r) {
        const auto& pts = samples[r].points;
        for (std::size_t i = 0; i < intervals.size(); ++i) {
            std::uint32_t c = 0;
            for (double p : pts)
                if (p > intervals[i].lo && p <= intervals[i].hi) ++c;
            out.counts[i][r] = c;
        }
        for (std::size_t k = 1; k < pts.size(); ++k) out.gaps.push_back(pts[k] - pts[k - 1]);
    }

    std::vector<std::vector<double>> cd(intervals.size(), std::vector<double>(R));
    for (std::size_t i = 0; i < intervals.size(); ++i) {
        for (std::size_t r = 0; r < R; ++r) cd[i][r] = static_cast<double>(out.counts[i][r]);
        IntervalStats st;
        st.interval = intervals[i];
        st.count_mean = pairwise_mean(cd[i]);
        auto m = central_moments(cd[i], st.count_mean);
        st.count_var = m.m2 * static_cast<double>(R) / static_cast<double>(R - 1);
        st.count_mean_se = std::sqrt(st.count_var / static_cast<double>(R));
        st.var_mean_ratio = st.count_mean > 0 ? st.count_var / st.count_mean : 0.0;
        st.var_mean_ratio_se = std::sqrt(2.0 / static_cast<double>(R - 1));
        out.intervals.push_back(st);
    }

    if (intervals.size() >= 2) {
        double m0 = out.intervals[0].count_mean, m1 = out.intervals[1].count_mean;
        std::vector<double> prod(R);
        for (std::size_t r = 0; r < R; ++r) prod[r] = (cd[0][r] - m0) * (cd[1][r] - m1);
        double cov = pairwise_mean(prod) * static_cast<double>(R) / static_cast<double>(R - 1);
        auto mp = central_moments(prod, pairwise_mean(prod));
        out.cross_covariance = cov;
        out.cross_covariance_se = std::sqrt(mp.m2 / static_cast<double>(R));
    }

    if (!out.gaps.empty()) {
        double wlen = 2.0 * samples[0].window;
        auto ks = ks_statistic(out.gaps,
                               [&](double g) { return window_gap_cdf(g, theta, wlen); });
        out.gap_ks_stat = ks.statistic;
        out.gap_ks_p = ks.p_value;
    }
    return out;
}

// ---------------------------------------------------------------------------

WegnerResult wegner_check(const MatrixSampler& sampler, cplx z, std::size_t replicas,
                          std::uint64_t seed, unsigned workers) {
    if (!(z.imag() > 0.0)) throw std::domain_error("wegner_check: need Im z > 0");
    // Probe the size once; all replicas share it.
    RandomStream probe(seed, 0);
    const std::size_t n = sampler(probe).size();
    std::vector<double> img(replicas * n);
    std::vector<char> ok;
    std::size_t skipped =
        run_replicas(replicas, workers, seed, ok, [&](std::size_t r, RandomStream& stream) {
            JacobiMatrix J = sampler(stream);
            auto diag = eig::resolvent_diagonal(J, z);
            for (std::size_t x = 0; x < n; ++x) img[r * n + x] = diag[x].imag();
        });

    WegnerResult out;
    out.skipped = skipped;
    out.bound = std::sqrt(M_PI / 2.0);
    out.mean_im_g.resize(n);
    out.se_im_g.resize(n);
    std::vector<double> col;
    col.reserve(replicas);
    for (std::size_t x = 0; x < n; ++x) {
        col.clear();
        for (std::size_t r = 0; r < replicas; ++r)
            if (ok[r]) col.push_back(img[r * n + x]);
        double mean = pairwise_mean(col);
        auto m = central_moments(col, mean);
        out.mean_im_g[x] = mean;
        out.se_im_g[x] = std::sqrt(m.m2 / static_cast<double>(col.size()));
        if (mean > out.estimate) {
            out.estimate = mean;
            out.estimate_se = out.se_im_g[x];
        }
    }
    out.pass = out.estimate <= out.bound + 3.0 * out.estimate_se;
    return out;
}

MinamiResult minami_check(const MatrixSampler& sampler, double E, double interval_length,
                          std::size_t block_len, std::size_t block_samples, std::uint64_t seed,
                          unsigned workers) {
    if (block_len < 10) throw std::invalid_argument("minami_check: block length must be >= 10");
    if (interval_length < 0.0) throw std::invalid_argument("minami_check: negative interval");
    RandomStream probe(seed, 0);
    const std::size_t n = sampler(probe).size();
    const std::size_t blocks_per_matrix = std::max<std::size_t>(1, n / block_len);
    const std::size_t matrices = (block_samples + blocks_per_matrix - 1) / blocks_per_matrix;

    const double lens[2] = {interval_length, 0.5 * interval_length};
    std::vector<std::uint32_t> hits(matrices * 2, 0);
    std::vector<std::uint32_t> totals(matrices * 2, 0);

    parallel_for(matrices, workers, [&](std::size_t r) {
        RandomStream stream(seed, r);
        JacobiMatrix J = sampler(stream);
        for (std::size_t p = 0; p < blocks_per_matrix; ++p) {
            std::size_t u = p * block_len + 1;
            std::size_t v = u + block_len - 1;
            if (v > J.size()) break;
            JacobiMatrix B = jacobi::restriction(J, u, v);
            for (int which = 0; which < 2; ++which) {
                double half = 0.5 * lens[which] / static_cast<double>(block_len);
                std::size_t c =
                    eig::sturm_count(B, E + half) - eig::sturm_count(B, E - half);
                hits[r * 2 + which] += (c >= 2) ? 1 : 0;
                totals[r * 2 + which] += static_cast<std::uint32_t>(c);
            }
        }
    });

    const double samples = static_cast<double>(matrices * blocks_per_matrix);
    MinamiResult out;
    for (int which = 0; which < 2; ++which) {
        double h = 0, tot = 0;
        for (std::size_t r = 0; r < matrices; ++r) {
            h += hits[r * 2 + which];
            tot += totals[r * 2 + which];
        }
        MinamiRow row;
        row.interval_length = lens[which];
        row.p_ge2 = h / samples;
        row.p_ge2_se = std::sqrt(std::max(row.p_ge2 * (1.0 - row.p_ge2), 0.0) / samples);
        double mean_count = tot / samples;
        row.poisson_reference = 1.0 - std::exp(-mean_count) * (1.0 + mean_count);
        out.rows.push_back(row);
    }
    if (out.rows[1].p_ge2 > 0) {
        out.ratio = out.rows[0].p_ge2 / out.rows[1].p_ge2;
        double r0 = out.rows[0].p_ge2_se / std::max(out.rows[0].p_ge2, 1e-300);
        double r1 = out.rows[1].p_ge2_se / std::max(out.rows[1].p_ge2, 1e-300);
        out.ratio_se = out.ratio * std::sqrt(r0 * r0 + r1 * r1);
    }
    return out;
}

DecayFit green_decay(const MatrixSampler& sampler, cplx z, double s, std::size_t replicas,
                     std::size_t max_distance, std::uint64_t seed, unsigned workers,
                     std::size_t fit_lo, std::size_t fit_hi) {
    if (!(s > 0.0 && s < 0.5)) throw std::invalid_argument("green_decay: need 0 < s < 1/2");
    if (z.imag() < 0.0) throw std::invalid_argument("green_decay: need Im z >= 0");
    if (z.imag() == 0.0) z += cplx{0.0, 1e-8};
    RandomStream probe(seed, 0);
    const std::size_t n = sampler(probe).size();
    const std::size_t xs = std::min(max_distance, n);

    std::vector<double> mom(replicas * xs);
    std::vector<char> ok;
    std::size_t skipped =
        run_replicas(replicas, workers, seed, ok, [&](std::size_t r, RandomStream& stream) {
            JacobiMatrix J = sampler(stream);
            auto row = eig::resolvent_first_row(J, z);
            for (std::size_t x = 0; x < xs; ++x) {
                mom[r * xs + x] = std::exp(s * row[x].log_abs());
            }
        });

    DecayFit out;
    out.skipped = skipped;
    out.mean_moment.resize(xs);
    out.se_moment.resize(xs);
    std::vector<double> col;
    col.reserve(replicas);
    for (std::size_t x = 0; x < xs; ++x) {
        col.clear();
        for (std::size_t r = 0; r < replicas; ++r)
            if (ok[r]) col.push_back(mom[r * xs + x]);
        out.mean_moment[x] = pairwise_mean(col);
        auto m = central_moments(col, out.mean_moment[x]);
        out.se_moment[x] = std::sqrt(m.m2 / static_cast<double>(col.size()));
    }

    fit_hi = std::min(fit_hi, xs);
    fit_lo = std::max<std::size_t>(fit_lo, 1);
    double sx = 0, sy = 0, sxx = 0, sxy = 0, cnt = 0;
    for (std::size_t x = fit_lo; x <= fit_hi; ++x) {
        double lx = static_cast<double>(x);
        double ly = std::log(std::max(out.mean_moment[x - 1], 1e-300));
        sx += lx; sy += ly; sxx += lx * lx; sxy += lx * ly; cnt += 1;
    }
    double denom = cnt * sxx - sx * sx;
    out.slope = (cnt * sxy - sx * sy) / denom;
    out.intercept = (sy - out.slope * sx) / cnt;
    double ss_res = 0, ss_tot = 0, ymean = sy / cnt;
    for (std::size_t x = fit_lo; x <= fit_hi; ++x) {
        double ly = std::log(std::max(out.mean_moment[x - 1], 1e-300));
        double pred = out.intercept + out.slope * static_cast<double>(x);
        ss_res += (ly - pred) * (ly - pred);
        ss_tot += (ly - ymean) * (ly - ymean);
    }
    out.r2 = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 0.0;
    out.m_s = std::exp(out.intercept);
    out.gamma_s = -out.slope;
    return out;
}

VarianceEstimate mean_density_estimate(const MatrixSampler& sampler, double E, double bin,
                                       std::size_t replicas, std::uint64_t seed,
                                       unsigned workers) {
    if (!(bin > 0.0)) throw std::invalid_argument("mean_density_estimate: bin must be positive");
    RandomStream probe(seed, 0);
    const std::size_t n = sampler(probe).size();
    std::vector<double> counts(replicas);
    std::vector<char> ok;
    std::size_t skipped =
        run_replicas(replicas, workers, seed, ok, [&](std::size_t r, RandomStream& stream) {
            JacobiMatrix J = sampler(stream);
            counts[r] = static_cast<double>(eig::sturm_count(J, E + 0.5 * bin) -
                                            eig::sturm_count(J, E - 0.5 * bin));
        });
    counts = compact(counts, ok);
    double mean = pairwise_mean(counts);
    auto m = central_moments(counts, mean);
    double scale = static_cast<double>(n) * bin;
    return {mean / scale, std::sqrt(m.m2 / static_cast<double>(counts.size())) / scale, skipped};
}

// ---------------------------------------------------------------------------

namespace {

// Asymptotic Kolmogorov distribution: Q(lambda) = P(K > lambda).
double kolmogorov_q(double lambda) {
    if (lambda <= 0.0) return 1.0;
    if (lambda < 1.18) {
        // Complementary series converges fast for small lambda.
        double t = std::exp(-M_PI * M_PI / (8.0 * lambda * lambda));
        double cdf = std::sqrt(2.0 * M_PI) / lambda * (t + std::pow(t, 9) + std::pow(t, 25));
        return 1.0 - cdf;
    }
    double q = 0.0;
    for (int k = 1; k <= 100; ++k) {
        double term = 2.0 * std::exp(-2.0 * k * k * lambda * lambda);
        q += (k % 2 == 1) ? term : -term;
        if (term < 1e-16) break;
    }
    return std::clamp(q, 0.0, 1.0);
}

} // namespace

KsResult ks_statistic(std::vector<double> sample, const std::function<double(double)>& cdf) {
    if (sample.empty()) throw std::invalid_argument("ks_statistic: empty sample");
    std::sort(sample.begin(), sample.end());
    const double m = static_cast<double>(sample.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        double F = cdf(sample[i]);
        d = std::max(d, F - static_cast<double>(i) / m);
        d = std::max(d, static_cast<double>(i + 1) / m - F);
    }
    return {d, kolmogorov_q(std::sqrt(m) * d)};
}

double standard_normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

} // namespace gbe::stats
