#include "concord/cli.hpp"

#include "concord/acceptance.hpp"
#include "concord/analytics.hpp"
#include "concord/errors.hpp"
#include "concord/estimation.hpp"
#include "concord/figure.hpp"
#include "concord/format.hpp"
#include "concord/simulation.hpp"
#include "concord/spec_parse.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <functional>
#include <map>

namespace concord {

namespace {

const char* attainer_name(analytics::Attainer a) {
    switch (a) {
    case analytics::Attainer::comonotone: return "M";
    case analytics::Attainer::countermonotone: return "W";
    case analytics::Attainer::independence: return "Pi";
    case analytics::Attainer::mid_mw: return "(M+W)/2";
    case analytics::Attainer::mid_mw_pi_segment: return "p(M+W)/2+(1-p)Pi";
    }
    return "?";
}

std::string join_attainers(const std::vector<analytics::Attainer>& as) {
    std::string out;
    for (const auto a : as) {
        out += (out.empty() ? "" : ";") + std::string(attainer_name(a));
    }
    return out;
}

FrechetWeights parse_weights(const std::string& text) {
    std::vector<double> w;
    for (const auto& item : split(text, ',')) w.push_back(parse_number(item));
    if (w.size() != 3) {
        throw ContractError("--w expects pM,pPi,pW");
    }
    return {w[0], w[1], w[2]};
}

void line(std::ostream& out, const std::string& name, double value) {
    out << name << ',' << format_number(value) << '\n';
}

struct AnalyticArgs {
    std::string quantity;
    std::string dist;
    std::string dist2;
    std::string copula;
    std::string weights;
    double rho = 0.0;
    double theta = 0.0;
    double nu = 0.0;
    double tau = 0.0;
    double e_w = 0.0;
    double e_w2 = 0.0;
    double u = 0.5;
    double v = 0.5;
};

void run_analytic(const AnalyticArgs& a, std::ostream& out) {
    const auto need = [](const std::string& value, const char* flag) {
        if (value.empty()) throw ContractError(std::string("this quantity needs ") + flag);
        return value;
    };
    const auto g = [&] { return parse_distribution(need(a.dist, "--dist")).g; };
    const auto c = [&] { return parse_copula(need(a.copula, "--copula")); };
    const auto w = [&] { return parse_weights(need(a.weights, "--w")); };
    const auto mixture = [&] {
        if (a.nu > 0.0) return analytics::student_t_mixture_moments(a.nu);
        return analytics::MixtureMoments{a.e_w > 0.0 ? a.e_w : 1.0, a.e_w2 > 0.0 ? a.e_w2 : 1.0};
    };

    const std::map<std::string, std::function<void()>> table = {
        {"var-x2", [&] { line(out, "var-x2", g().var_x_squared()); }},
        {"sigma2-frechet", [&] { line(out, "sigma2-frechet", analytics::sigma2_frechet(g(), w())); }},
        {"kappa-frechet", [&] { line(out, "kappa-frechet", analytics::kappa_frechet(w())); }},
        {"tau-frechet", [&] { line(out, "tau-frechet", analytics::tau_frechet(w())); }},
        {"envelope",
         [&] {
             const auto e = analytics::envelope_frechet(g());
             line(out, "best", e.best);
             line(out, "worst", e.worst);
             out << "best-attainers," << join_attainers(e.best_attainers) << '\n';
             out << "worst-attainers," << join_attainers(e.worst_attainers) << '\n';
         }},
        {"prefer",
         [&] {
             const auto p = analytics::prefer(g(), parse_distribution(need(a.dist2, "--dist2")).g);
             out << "prefer,"
                 << (p == analytics::Preference::first ? "first"
                     : p == analytics::Preference::second ? "second" : "equivalent")
                 << '\n';
         }},
        {"beta", [&] { line(out, "beta", analytics::beta(c())); }},
        {"sigma2-beta", [&] { line(out, "sigma2-beta", analytics::sigma2_beta(c())); }},
        {"tau", [&] { line(out, "tau", analytics::tau_closed_form(c())); }},
        {"sigma2-tau",
         [&] {
             const double t = a.copula.empty() ? a.tau : analytics::tau_closed_form(c());
             line(out, "sigma2-tau", analytics::sigma2_tau_analytic(t));
         }},
        {"beta-clayton", [&] { line(out, "beta-clayton", analytics::beta_clayton(a.theta)); }},
        {"sigma2-nvm", [&] { line(out, "sigma2-nvm", analytics::sigma2_nvm(mixture(), a.rho)); }},
        {"kappa-discrete",
         [&] { line(out, "kappa-discrete", analytics::kappa_discrete(parse_discrete_spec(need(a.dist, "--dist")), c())); }},
        {"sigma2-discrete",
         [&] { line(out, "sigma2-discrete", analytics::sigma2_discrete(parse_discrete_spec(need(a.dist, "--dist")), c())); }},
        {"sigma2", [&] {
             const auto s = analytics::sigma2_closed_form(g(), c());
             if (!s) {
                 throw CapabilityError("no closed form for sigma^2 of " + a.dist + " under " + a.copula);
             }
             line(out, "sigma2", *s);
         }},
        {"squared-copula",
         [&] {
             const auto gd = g();
             line(out, "squared-copula", analytics::squared_copula(c(), gd.is_continuous(), a.u, a.v));
         }},
    };
    const auto it = table.find(a.quantity);
    if (it == table.end()) {
        std::string known;
        for (const auto& [k, f] : table) known += (known.empty() ? "" : ", ") + k;
        throw ContractError("unknown quantity '" + a.quantity + "'; known: " + known);
    }
    it->second();
}


struct EstimateArgs {
    std::string copula;
    std::string dist;
    std::size_t n = 100000;
    std::uint64_t seed = 1;
    std::string estimator = "kappa";
    std::string shift;
    std::string dump;
};

void run_estimate(const EstimateArgs& a, std::ostream& out) {
    const Copula c = parse_copula(a.copula);
    auto request = parse_distribution(a.dist);
    if (a.shift == "opt") {
        request.optimal_shift = true;
    } else if (!a.shift.empty()) {
        throw ContractError("--shift accepts only 'opt'; use +shift:<mu> in --dist for a fixed shift");
    }
    const auto pairs = sample(c, a.n, a.seed);
    if (!a.dump.empty()) {
        std::ofstream file(a.dump);
        if (!file) throw ContractError("cannot write " + a.dump);
        file << "u,v\n";
        for (const auto& p : pairs) file << format_number(p.u) << ',' << format_number(p.v) << '\n';
    }

    EstimationResult r;
    double mu = request.g.shift();
    if (a.estimator == "kappa") {
        ConcordanceInducing g = request.g;
        if (request.optimal_shift) {
            mu = estimate_optimal_shift(g, pairs);
            g = shifted(g, mu);
        }
        r = estimate_kappa(g, pairs, a.seed);
    } else if (a.estimator == "tau") {
        const std::size_t half = a.n / 2;
        r = estimate_tau(std::span<const UV>(pairs.data(), half),
                         std::span<const UV>(pairs.data() + half, half), a.seed);
        mu = 0.0;
    } else if (a.estimator == "tau-overlap") {
        r = estimate_tau_overlap(pairs, a.seed);
        mu = 0.0;
    } else {
        throw ContractError("unknown estimator '" + a.estimator + "' (kappa, tau, tau-overlap)");
    }
    out << "estimator,copula,estimate,sigma2_hat,se_sigma2,n,seed,shift,variance_floored\n";
    out << r.estimator_id << ',' << c.describe() << ',' << format_number(r.estimate) << ','
        << format_number(r.sigma2_hat) << ',' << format_number(r.se_sigma2) << ',' << r.n << ','
        << r.seed << ',' << format_number(mu) << ',' << (r.variance_floored ? 1 : 0) << '\n';
}

struct GridArgs {
    SimulationConfig cfg;
    std::string dists;
    std::string families;
    bool no_shift = false;
    bool no_tau = false;
    std::string out;

    SimulationConfig resolve() const {
        SimulationConfig c = cfg;
        if (!dists.empty()) c.distributions = split(dists, ',');
        if (!families.empty()) c.copula_families = split(families, ',');
        c.include_shift = !no_shift;
        c.include_tau = !no_tau;
        return c;
    }
};

void add_grid_flags(CLI::App* cmd, GridArgs& g) {
    cmd->add_option("--seed", g.cfg.base_seed, "base seed");
    cmd->add_option("--n", g.cfg.n, "sample size per cell");
    cmd->add_option("--grid-points", g.cfg.grid_points, "number of rho grid points");
    cmd->add_option("--nu", g.cfg.nu_t_copula, "degrees of freedom of the t copula");
    cmd->add_option("--dists", g.dists, "comma-separated distribution specs");
    cmd->add_option("--families", g.families, "comma-separated subset of gauss,t,clayton");
    cmd->add_flag("--no-shift", g.no_shift, "skip optimally shifted rows");
    cmd->add_flag("--no-tau", g.no_tau, "skip Kendall's tau rows");
    cmd->add_option("--threads", g.cfg.threads, "worker threads (0 = all cores)");
    cmd->add_option("--k", g.cfg.only_k, "restrict to these grid indices")->delimiter(',');
}

void write_file(const std::string& path, const std::function<void(std::ostream&)>& body) {
    std::ofstream file(path, std::ios::binary);
    if (!file) throw ContractError("cannot write " + path);
    body(file);
}

} // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Transformed rank correlations: closed forms, estimators and the grid study",
                 "concord"};
    app.require_subcommand(1, 1);

    AnalyticArgs an;
    auto* analytic = app.add_subcommand("analytic", "print a closed-form quantity as name,value");
    analytic->add_option("quantity", an.quantity, "var-x2, sigma2-frechet, envelope, sigma2, ...")
        ->required();
    analytic->add_option("--dist", an.dist, "distribution spec");
    analytic->add_option("--dist2", an.dist2, "second distribution (prefer)");
    analytic->add_option("--copula", an.copula, "copula spec");
    analytic->add_option("--w", an.weights, "Frechet weights pM,pPi,pW");
    analytic->add_option("--rho", an.rho, "correlation parameter");
    analytic->add_option("--theta", an.theta, "Clayton parameter");
    analytic->add_option("--nu", an.nu, "t mixing degrees of freedom");
    analytic->add_option("--tau", an.tau, "Kendall's tau");
    analytic->add_option("--e-w", an.e_w, "E[W] of the mixing variable");
    analytic->add_option("--e-w2", an.e_w2, "E[W^2] of the mixing variable");
    analytic->add_option("--u", an.u, "first argument of squared-copula");
    analytic->add_option("--v", an.v, "second argument of squared-copula");

    EstimateArgs es;
    auto* estimate = app.add_subcommand("estimate", "run one estimator on a seeded sample");
    estimate->add_option("--copula", es.copula, "copula spec")->required();
    estimate->add_option("--dist", es.dist, "distribution spec")->required();
    estimate->add_option("--n", es.n, "sample size");
    estimate->add_option("--seed", es.seed, "seed");
    estimate->add_option("--estimator", es.estimator, "kappa, tau or tau-overlap");
    estimate->add_option("--shift", es.shift, "'opt' applies the plug-in optimal shift");
    estimate->add_option("--dump", es.dump, "write the sample as u,v CSV");

    GridArgs sim;
    auto* simulate = app.add_subcommand("simulate", "run the rho grid and write CSV");
    add_grid_flags(simulate, sim);
    simulate->add_option("--out", sim.out, "CSV path (default stdout)");

    GridArgs fig;
    fig.out = "figure";
    auto* figure = app.add_subcommand("figure", "run the rho grid and write <out>.csv and <out>.svg");
    add_grid_flags(figure, fig);
    figure->add_option("--out", fig.out, "output path prefix");

    AcceptanceOptions acc;
    auto* selftest = app.add_subcommand("selftest", "run the acceptance suite");
    selftest->add_option("--seed", acc.base_seed, "base seed");
    selftest->add_option("--only", acc.only, "criterion ids to run")->delimiter(',');
    selftest->add_option("--threads", acc.threads, "worker threads for the grid criterion");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n' << app.help();
        return kExitUsage;
    }

    try {
        if (*analytic) {
            run_analytic(an, out);
        } else if (*estimate) {
            run_estimate(es, out);
        } else if (*simulate) {
            const auto records = run_grid(sim.resolve());
            if (sim.out.empty()) {
                write_csv(out, records);
            } else {
                write_file(sim.out, [&](std::ostream& f) { write_csv(f, records); });
            }
        } else if (*figure) {
            const auto records = run_grid(fig.resolve());
            write_file(fig.out + ".csv", [&](std::ostream& f) { write_csv(f, records); });
            write_file(fig.out + ".svg", [&](std::ostream& f) { write_figure_svg(f, records); });
            out << fig.out << ".csv\n" << fig.out << ".svg\n";
        } else if (*selftest) {
            const auto results = run_acceptance(acc);
            print_acceptance(out, results);
            for (const auto& r : results) {
                if (!r.pass) return kExitAcceptance;
            }
        }
    } catch (const CapabilityError& e) {
        err << "capability error: " << e.what() << '\n';
        return kExitCapability;
    } catch (const ContractError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    return kExitOk;
}

} // namespace concord
