#include "concord/acceptance.hpp"

#include "concord/analytics.hpp"
#include "concord/estimation.hpp"
#include "concord/format.hpp"
#include "concord/simulation.hpp"
#include "concord/spec_parse.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <map>
#include <numbers>

namespace concord {

namespace {

constexpr std::size_t kN = 100000;
// two-sided normal tail beyond 3 standard errors
constexpr double kThreeSigmaTail = 0.0026997960632601866;
const std::vector<std::string> kBuiltins = {"uniform", "beta:0.5", "normal", "t:10", "bernoulli"};

/// Collects sub-checks of one criterion.
class Tally {
public:
    /// |value - target| <= tol; records the ratio for the worst-margin report.
    void near(double value, double target, double tol, const std::string& what) {
        const double diff = std::abs(value - target);
        const double ratio = tol > 0.0 ? diff / tol : (diff == 0.0 ? 0.0 : INFINITY);
        worst_ = std::max(worst_, ratio);
        record(diff <= tol, what + " got " + format_number(value) + " want " + format_number(target) +
                                " tol " + format_number(tol));
    }

    /// near() at 3 standard errors; also accumulates the number of
    /// exceedances expected by chance when the target is exact.
    void near_3se(double value, double target, double se, const std::string& what) {
        near(value, target, 3.0 * se, what);
        expected_false_ += kThreeSigmaTail;
        ++statistical_;
    }

    void expect(bool ok, const std::string& what) { record(ok, what); }

    void fill(CriterionResult& r) const {
        r.checks = checks_;
        r.failures = failures_;
        r.pass = checks_ > 0 && failures_ == 0;
        r.detail = "worst=" + format_number(std::round(worst_ * 1000.0) / 1000.0) + "xtol";
        if (statistical_ > 0) {
            r.detail += " 3se-checks=" + std::to_string(statistical_) + " chance-exceedances~" +
                        format_number(std::round(expected_false_ * 100.0) / 100.0);
        }
        if (!failed_.empty()) {
            r.detail += " first-failures:";
            for (const auto& f : failed_) r.detail += " [" + f + "]";
        }
    }

private:
    void record(bool ok, const std::string& what) {
        ++checks_;
        if (!ok) {
            ++failures_;
            if (failed_.size() < 3) failed_.push_back(what);
        }
    }

    std::size_t checks_ = 0;
    std::size_t failures_ = 0;
    double worst_ = 0.0;
    double expected_false_ = 0.0;
    std::size_t statistical_ = 0;
    std::vector<std::string> failed_;
};

ConcordanceInducing dist(const std::string& spec) {
    return parse_distribution(spec).g;
}

double elliptical_beta(double rho) {
    return 2.0 / std::numbers::pi * std::asin(rho);
}

std::vector<FrechetWeights> simplex_grid() {
    std::vector<FrechetWeights> out;
    for (int i = 0; i <= 4; ++i) {
        for (int j = 0; i + j <= 4; ++j) {
            out.push_back({i / 4.0, j / 4.0, (4 - i - j) / 4.0});
        }
    }
    return out;
}

std::string describe_w(const FrechetWeights& w) {
    return frechet(w).describe();
}

// 1
void fundamental_values(Tally& t, std::uint64_t seed) {
    const std::vector<std::pair<std::string, Copula>> copulas = {
        {"Pi", independence()}, {"M", comonotone()}, {"W", countermonotone()}};
    for (std::size_t c = 0; c < copulas.size(); ++c) {
        const auto s = mix_seed({seed, 1, c});
        const auto pairs = sample(copulas[c].second, kN, s);
        for (const auto& d : kBuiltins) {
            const auto g = dist(d);
            const double est = estimate_kappa(g, pairs, s).sigma2_hat;
            const double v = g.var_x_squared();
            const double target = copulas[c].first == "Pi" ? 1.0 : v;
            const double tol = target == 0.0 ? 0.01 : 0.05 * target;
            t.near(est, target, tol, d + " on " + copulas[c].first);
        }
    }
}

// 2
void mixture_ceiling(Tally& t, std::uint64_t seed) {
    const auto s = mix_seed({seed, 2});
    const auto pairs = sample(frechet({0.5, 0.0, 0.5}), kN, s);
    for (const auto& d : kBuiltins) {
        const auto g = dist(d);
        const double target = 1.0 + g.var_x_squared();
        t.near(estimate_kappa(g, pairs, s).sigma2_hat, target, 0.05 * target, d + " on (M+W)/2");
    }
}

// 3
void frechet_surface(Tally& t, std::uint64_t seed) {
    const auto grid = simplex_grid();
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const auto s = mix_seed({seed, 3, i});
        const auto pairs = sample(frechet(grid[i]), kN, s);
        for (const auto& d : kBuiltins) {
            const auto g = dist(d);
            const auto r = estimate_kappa(g, pairs, s);
            t.near_3se(r.sigma2_hat, analytics::sigma2_frechet(g, grid[i]), r.se_sigma2,
                   d + " on " + describe_w(grid[i]));
        }
    }
}

struct NamedCopula {
    Copula c;
    double closed_beta;
    double closed_tau;
};

std::vector<NamedCopula> identity_copulas() {
    std::vector<NamedCopula> out;
    for (double rho : {-0.9, -0.5, 0.0, 0.5, 0.9}) {
        out.push_back({gaussian(rho), elliptical_beta(rho), elliptical_beta(rho)});
    }
    for (double theta : {-0.5, 1.0, 2.0, 5.0}) {
        const double beta = 4.0 * std::pow(std::pow(2.0, theta + 1.0) - 1.0, -1.0 / theta) - 1.0;
        out.push_back({clayton(theta), beta, theta / (theta + 2.0)});
    }
    for (const auto& w : simplex_grid()) {
        out.push_back({frechet(w), w.p_m - w.p_w, (w.p_m - w.p_w) * (w.p_m + w.p_w + 2.0) / 3.0});
    }
    return out;
}

// 4 and 5 share samples
void blomqvist_and_kendall(Tally& blomqvist, Tally& kendall, std::uint64_t seed, bool want_beta,
                           bool want_tau) {
    const auto copulas = identity_copulas();
    const auto g = make_bernoulli();
    for (std::size_t i = 0; i < copulas.size(); ++i) {
        const auto& nc = copulas[i];
        const auto s = mix_seed({seed, 4, i});
        const auto pairs = sample(nc.c, kN, s);
        if (want_beta) {
            const auto r = estimate_kappa(g, pairs, s);
            blomqvist.near_3se(r.sigma2_hat, 1.0 - nc.closed_beta * nc.closed_beta, r.se_sigma2,
                           "beta on " + nc.c.describe());
        }
        if (want_tau) {
            const std::size_t half = kN / 2;
            const auto r = estimate_tau(std::span<const UV>(pairs.data(), half),
                                        std::span<const UV>(pairs.data() + half, half), s);
            kendall.near_3se(r.sigma2_hat, 1.0 - nc.closed_tau * nc.closed_tau, r.se_sigma2,
                         "tau on " + nc.c.describe());
        }
    }
}

// 6
void normal_variance_mixture(Tally& t, std::uint64_t seed) {
    const auto normal = make_normal();
    const auto t5 = make_student_t(5.0);
    // mixture ratio recovered from Var(X^2) = 3 r - 1
    const double r = (t5.var_x_squared() + 1.0) / 3.0;
    const analytics::MixtureMoments implied{1.0, r};
    std::size_t i = 0;
    for (double rho : {0.0, 0.5, -0.5, 0.9, -0.9}) {
        const auto s1 = mix_seed({seed, 6, i++});
        const auto a = estimate_kappa(normal, sample(gaussian(rho), kN, s1), s1);
        t.near_3se(a.sigma2_hat, rho * rho + 1.0, a.se_sigma2, "normal on gauss:" + format_number(rho));
        const auto s2 = mix_seed({seed, 6, i++});
        const auto b = estimate_kappa(t5, sample(student_t_copula(rho, 5.0), kN, s2), s2);
        t.near_3se(b.sigma2_hat, analytics::sigma2_nvm(implied, rho), b.se_sigma2,
               "t:5 on t:" + format_number(rho) + ",5");
    }
}

// 7
void optimal_shift_null(Tally& t, std::uint64_t seed) {
    std::size_t i = 0;
    const std::vector<Copula> elliptical = {gaussian(-0.5), gaussian(0.5), gaussian(0.9),
                                            student_t_copula(-0.5, 5.0), student_t_copula(0.5, 5.0),
                                            student_t_copula(0.9, 5.0)};
    for (const auto& c : elliptical) {
        const auto s = mix_seed({seed, 7, i++});
        const auto pairs = sample(c, kN, s);
        for (const auto& d : kBuiltins) {
            const auto e = estimate_optimal_shift_detailed(dist(d), pairs);
            t.near_3se(e.mu, 0.0, e.se, d + " on " + c.describe());
        }
    }
    const std::vector<Copula> others = {clayton(2.0), clayton(5.0), clayton(-0.5),
                                        frechet({0.3, 0.3, 0.4}), reflect(clayton(3.0), Reflection::nu1),
                                        independence()};
    const auto bernoulli = make_bernoulli();
    for (const auto& c : others) {
        const auto s = mix_seed({seed, 7, i++});
        const auto e = estimate_optimal_shift_detailed(bernoulli, sample(c, kN, s));
        t.near_3se(e.mu, 0.0, e.se, "bernoulli on " + c.describe());
    }

    // brute-force minimization of the shifted sample variance
    const auto s = mix_seed({seed, 7, i++});
    const auto pairs = sample(clayton(5.0), kN, s);
    const auto uniform = make_uniform();
    std::vector<double> x(kN);
    std::vector<double> y(kN);
    for (std::size_t j = 0; j < kN; ++j) {
        x[j] = uniform.quantile(pairs[j].u);
        y[j] = uniform.quantile(pairs[j].v);
    }
    const auto shifted_variance = [&](double mu) {
        Moments m;
        for (std::size_t j = 0; j < kN; ++j) {
            m.push((x[j] + mu) * (y[j] + mu));
        }
        return m.sample_variance();
    };
    // coarse scan over [-2, 2], then refine around the best coarse point
    double best_mu = 0.0;
    double best_var = INFINITY;
    for (double step : {1e-1, 1e-2, 1e-3}) {
        const double centre = best_mu;
        for (int j = -20; j <= 20; ++j) {
            const double mu = centre + j * step;
            const double var = shifted_variance(mu);
            if (var < best_var) {
                best_var = var;
                best_mu = mu;
            }
        }
    }
    t.near(estimate_optimal_shift(uniform, pairs), best_mu, 1e-2, "uniform on clayton:5 vs grid search");
}

// 8
void section_examples(Tally& t, std::uint64_t seed) {
    const auto mix = make_mixture_point_uniform();
    const std::vector<std::vector<int>> perms = {{2, 1, 4, 3}, {3, 4, 1, 2}, {2, 4, 1, 3}};
    std::size_t i = 0;
    for (const auto& perm : perms) {
        const auto c = shuffle_of_m(ShuffleSpec::equal_strips(perm, {1, 1, 1, 1}));
        const auto s = mix_seed({seed, 8, i++});
        const auto r = estimate_kappa(mix, sample(c, kN, s), s);
        t.expect(r.sigma2_hat <= 1e-10, "mix0u6 on " + c.describe() + " sigma2 " + format_number(r.sigma2_hat));
        t.near(r.estimate, 0.0, 1e-12, "mix0u6 on " + c.describe() + " kappa");
    }
    const auto four = make_discrete(four_point_spec());
    const auto c4 = shuffle_of_m(ShuffleSpec::equal_strips({2, 1, 4, 3}, {-1, -1, -1, -1}));
    const auto s = mix_seed({seed, 8, i++});
    const auto r = estimate_kappa(four, sample(c4, kN, s), s);
    t.expect(r.sigma2_hat <= 1e-10, "four-point on " + c4.describe() + " sigma2 " + format_number(r.sigma2_hat));
    t.near(r.estimate, 1.0 / std::numbers::sqrt2, 1e-12, "four-point on " + c4.describe() + " kappa");
}

// 9
void discrete_sums_equivalence(Tally& t) {
    const auto spec = blomqvist_spec();
    struct Case {
        Copula c;
        double beta;
    };
    std::vector<Case> cases = {
        {independence(), 0.0},
        {comonotone(), 1.0},
        {countermonotone(), -1.0},
        {gaussian(-0.7), elliptical_beta(-0.7)},
        {gaussian(0.3), elliptical_beta(0.3)},
        {clayton(2.0), analytics::beta_clayton(2.0)},
        {clayton(-0.5), analytics::beta_clayton(-0.5)},
        {frechet({0.2, 0.5, 0.3}), -0.1},
        {frechet({0.6, 0.1, 0.3}), 0.3},
        {reflect(clayton(3.0), Reflection::nu1), -analytics::beta_clayton(3.0)},
    };
    for (const auto& cs : cases) {
        const std::string name = cs.c.describe();
        const double s2 = analytics::sigma2_discrete(spec, cs.c);
        t.near(analytics::kappa_discrete(spec, cs.c), cs.beta, 1e-9, "kappa " + name);
        t.near(s2, analytics::sigma2_beta(cs.c), 1e-9, "sigma2 vs sigma2_beta " + name);
        t.near(s2, 1.0 - cs.beta * cs.beta, 1e-9, "sigma2 vs closed form " + name);
    }
}

// 10
void squared_copula_checks(Tally& t) {
    const auto pi = independence();
    const auto m = comonotone();
    const auto w = countermonotone();
    for (int i = 0; i <= 20; ++i) {
        for (int j = 0; j <= 20; ++j) {
            const double u = i / 20.0;
            const double v = j / 20.0;
            const std::string at = "(" + format_number(u) + "," + format_number(v) + ")";
            t.near(analytics::squared_copula(pi, true, u, v), u * v, 1e-9, "Pi" + at);
            t.near(analytics::squared_copula(m, true, u, v), std::min(u, v), 1e-9, "M" + at);
            t.near(analytics::squared_copula(w, true, u, v), std::min(u, v), 1e-9, "W" + at);
        }
    }
    for (const auto& fw : simplex_grid()) {
        const auto mixed = frechet(fw);
        for (int i = 0; i <= 10; ++i) {
            for (int j = 0; j <= 10; ++j) {
                const double u = i / 10.0;
                const double v = j / 10.0;
                const double combo = fw.p_m * analytics::squared_copula(m, true, u, v) +
                                     fw.p_pi * analytics::squared_copula(pi, true, u, v) +
                                     fw.p_w * analytics::squared_copula(w, true, u, v);
                t.near(analytics::squared_copula(mixed, true, u, v), combo, 1e-10,
                       "convex combination " + describe_w(fw));
            }
        }
    }
}

// 11
void figure_reproduction(Tally& t, std::uint64_t seed, unsigned threads) {
    SimulationConfig cfg;
    cfg.base_seed = seed;
    cfg.threads = threads;
    const auto start = std::chrono::steady_clock::now();
    const auto records = run_grid(cfg);
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    t.expect(seconds <= 120.0, "grid runtime " + format_number(seconds) + "s");
    t.expect(records.size() == 50 * 3 * 11, "record count " + std::to_string(records.size()));

    std::map<std::tuple<std::string, std::size_t, std::string, bool>, const SimulationRecord*> index;
    for (const auto& r : records) {
        index[{r.family, r.k, r.dist, r.shifted}] = &r;
    }
    const auto at = [&](const std::string& f, std::size_t k, const std::string& d, bool sh) {
        return index.at({f, k, d, sh});
    };
    const auto combined = [](const SimulationRecord* a, const SimulationRecord* b) {
        return std::hypot(a->se_sigma2, b->se_sigma2);
    };
    std::vector<std::string> columns;
    for (const auto& d : cfg.distributions) columns.push_back(dist(d).name());
    columns.push_back("kendall");
    const std::size_t last = cfg.grid_points - 1;

    for (const std::string family : {"gauss", "t"}) {
        for (const auto& d : columns) {
            for (std::size_t k = 0; k < cfg.grid_points / 2; ++k) {
                const auto* a = at(family, k, d, false);
                const auto* b = at(family, last - k, d, false);
                t.near_3se(a->sigma2_hat, b->sigma2_hat, combined(a, b),
                       "symmetry " + family + " " + d + " k=" + std::to_string(k));
            }
        }
        for (std::size_t k = 0; k < cfg.grid_points; ++k) {
            const auto* a = at(family, k, "bernoulli", false);
            const auto* b = at(family, k, "kendall", false);
            t.near_3se(a->sigma2_hat, b->sigma2_hat, combined(a, b),
                   "beta/tau " + family + " k=" + std::to_string(k));
            for (std::size_t c = 0; c + 1 < columns.size(); ++c) {
                const auto* u = at(family, k, columns[c], false);
                const auto* s = at(family, k, columns[c], true);
                t.near(s->sigma2_hat, u->sigma2_hat, 3.0 * combined(u, s),
                       "shift no-op " + family + " " + columns[c] + " k=" + std::to_string(k));
            }
        }
    }

    // endpoints approach M or W, where sigma^2 = V: below 1 when V < 1, above when V > 1
    for (const auto& family : cfg.copula_families) {
        for (const auto& d : columns) {
            const double v = d == "kendall" ? 0.0 : dist(d).var_x_squared();
            for (std::size_t k : {std::size_t{0}, last}) {
                const auto* r = at(family, k, d, false);
                const double tol = 3.0 * r->se_sigma2;
                const bool side = v < 1.0 ? r->sigma2_hat < 1.0 - tol : r->sigma2_hat > 1.0 + tol;
                t.expect(side, "endpoint side " + family + " " + d + " k=" + std::to_string(k) +
                                   " sigma2 " + format_number(r->sigma2_hat));
                t.near(r->sigma2_hat, v, 0.5 * std::abs(1.0 - v) + tol,
                       "endpoint level " + family + " " + d + " k=" + std::to_string(k));
            }
        }
    }
}

// 12
void clt_replication_check(Tally& t, std::uint64_t seed) {
    const std::vector<std::pair<std::string, Copula>> pairs = {
        {"bernoulli", independence()},
        {"normal", comonotone()},
        {"uniform", countermonotone()},
        {"beta:0.5", frechet({0.5, 0.0, 0.5})},
        {"normal", gaussian(0.5)},
        {"bernoulli", clayton(2.0)},
    };
    std::size_t i = 0;
    for (const auto& [d, c] : pairs) {
        const auto summary = clt_replication(dist(d), c, 10000, 200, mix_seed({seed, 12, i++}));
        if (!summary.reference) {
            t.expect(false, d + " on " + c.describe() + " has no closed form");
            continue;
        }
        t.near(summary.variance, *summary.reference, 0.25 * *summary.reference,
               d + " on " + c.describe());
    }
}

} // namespace

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opts) {
    const auto wanted = [&](int id) {
        return opts.only.empty() || std::find(opts.only.begin(), opts.only.end(), id) != opts.only.end();
    };
    const std::uint64_t seed = opts.base_seed;
    std::vector<CriterionResult> out;
    const auto run = [&](int id, const char* name, const std::function<void(Tally&)>& body) {
        if (!wanted(id)) return;
        const auto start = std::chrono::steady_clock::now();
        Tally t;
        CriterionResult r;
        r.id = id;
        r.name = name;
        body(t);
        t.fill(r);
        r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        out.push_back(std::move(r));
    };

    run(1, "fundamental-values", [&](Tally& t) { fundamental_values(t, seed); });
    run(2, "mixture-ceiling", [&](Tally& t) { mixture_ceiling(t, seed); });
    run(3, "frechet-surface", [&](Tally& t) { frechet_surface(t, seed); });
    Tally unused;
    run(4, "blomqvist-identity", [&](Tally& t) { blomqvist_and_kendall(t, unused, seed, true, false); });
    run(5, "kendall-identity", [&](Tally& t) { blomqvist_and_kendall(unused, t, seed, false, true); });
    run(6, "normal-variance-mixture", [&](Tally& t) { normal_variance_mixture(t, seed); });
    run(7, "optimal-shift-null", [&](Tally& t) { optimal_shift_null(t, seed); });
    run(8, "zero-variance-examples", [&](Tally& t) { section_examples(t, seed); });
    run(9, "discrete-sums-equivalence", [&](Tally& t) { discrete_sums_equivalence(t); });
    run(10, "squared-copula", [&](Tally& t) { squared_copula_checks(t); });
    run(11, "figure-grid-properties", [&](Tally& t) { figure_reproduction(t, seed, opts.threads); });
    run(12, "clt-replication", [&](Tally& t) { clt_replication_check(t, seed); });
    return out;
}

void print_acceptance(std::ostream& out, const std::vector<CriterionResult>& results) {
    for (const auto& r : results) {
        char secs[32];
        std::snprintf(secs, sizeof secs, "%.1fs", r.seconds);
        out << (r.pass ? "PASS " : "FAIL ") << r.id << ' ' << r.name << " checks=" << r.checks
            << " failed=" << r.failures << ' ' << r.detail << " time=" << secs << '\n';
    }
}

} // namespace concord
