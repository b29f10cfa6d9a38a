#include "concord/simulation.hpp"

#include "concord/analytics.hpp"
#include "concord/errors.hpp"
#include "concord/estimation.hpp"
#include "concord/format.hpp"
#include "concord/spec_parse.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

namespace concord {

const char* const kSimulationCsvHeader =
    "family,k,rho,theta_or_nu,dist,shifted,estimator,kappa_hat,sigma2_hat,se_sigma2,n,seed";

void SimulationConfig::validate() const {
    if (grid_points < 2) {
        throw ContractError("simulation needs grid_points >= 2");
    }
    if (n < 100) {
        throw ContractError("simulation needs n >= 100");
    }
    if (!(nu_t_copula > 0.0)) {
        throw ContractError("t copula degrees of freedom must be positive");
    }
    for (const auto& f : copula_families) {
        if (f != "gauss" && f != "t" && f != "clayton") {
            throw ContractError("unknown copula family '" + f + "' (gauss, t, clayton)");
        }
    }
    for (const auto k : only_k) {
        if (k >= grid_points) {
            throw ContractError("grid index " + std::to_string(k) + " is outside the grid");
        }
    }
    for (const auto& d : distributions) {
        if (parse_distribution(d).g.is_shifted()) {
            throw ContractError("grid distributions must be unshifted; shifting is include_shift");
        }
    }
}

double grid_rho(std::size_t k, std::size_t grid_points) {
    return -0.99 + 1.98 * static_cast<double>(k) / static_cast<double>(grid_points - 1);
}

Copula grid_copula(const std::string& family, double rho, double nu) {
    if (family == "gauss") return gaussian(rho);
    if (family == "t") return student_t_copula(rho, nu);
    if (family == "clayton") return clayton(2.0 * rho / (1.0 - rho));
    throw ContractError("unknown copula family '" + family + "'");
}

std::uint64_t mix_seed(std::initializer_list<std::uint64_t> words) {
    const auto splitmix = [](std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    };
    std::uint64_t h = 0;
    for (auto w : words) {
        h = splitmix(h ^ splitmix(w));
    }
    return h;
}

namespace {

struct Cell {
    std::size_t family_index;
    std::size_t k;
};

std::vector<SimulationRecord> run_cell(const SimulationConfig& cfg,
                                       const std::vector<ConcordanceInducing>& dists,
                                       const Cell& cell) {
    const std::string& family = cfg.copula_families[cell.family_index];
    const double rho = grid_rho(cell.k, cfg.grid_points);
    const std::uint64_t family_code = family == "gauss" ? 1 : family == "t" ? 2 : 3;
    const std::uint64_t seed = mix_seed({cfg.base_seed, family_code, cell.k});

    SimulationRecord base;
    base.family = family;
    base.k = cell.k;
    base.rho = rho;
    base.seed = seed;
    if (family == "t") base.theta_or_nu = cfg.nu_t_copula;
    if (family == "clayton") base.theta_or_nu = 2.0 * rho / (1.0 - rho);

    std::vector<SimulationRecord> out;
    if (family == "clayton" && rho >= 1.0 - 1e-9) {
        base.estimator = "skip";
        base.dist = "none";
        out.push_back(base);
        return out;
    }

    const Copula c = grid_copula(family, rho, cfg.nu_t_copula);
    const auto pairs = sample(c, cfg.n, seed);
    std::vector<double> u(cfg.n);
    std::vector<double> v(cfg.n);
    for (std::size_t i = 0; i < cfg.n; ++i) {
        u[i] = pairs[i].u;
        v[i] = pairs[i].v;
    }
    std::vector<double> x(cfg.n);
    std::vector<double> y(cfg.n);

    for (const auto& g : dists) {
        g.quantiles(u, x);
        g.quantiles(v, y);
        auto r = estimate_kappa_from_scores(x, y, 0.0, seed, "kappa");
        SimulationRecord rec = base;
        rec.dist = g.name();
        rec.estimator = "kappa";
        rec.kappa_hat = r.estimate;
        rec.sigma2_hat = r.sigma2_hat;
        rec.se_sigma2 = r.se_sigma2;
        rec.n = r.n;
        out.push_back(rec);

        if (cfg.include_shift) {
            const double mu = optimal_shift_from_scores(x, y).mu;
            for (std::size_t i = 0; i < cfg.n; ++i) {
                x[i] += mu;
                y[i] += mu;
            }
            auto s = estimate_kappa_from_scores(x, y, mu, seed, "kappa");
            rec.shifted = true;
            rec.kappa_hat = s.estimate;
            rec.sigma2_hat = s.sigma2_hat;
            rec.se_sigma2 = s.se_sigma2;
            rec.mu_hat = mu;
            out.push_back(rec);
        }
    }

    if (cfg.include_tau) {
        const std::size_t half = cfg.n / 2;
        auto r = estimate_tau(std::span<const UV>(pairs.data(), half),
                              std::span<const UV>(pairs.data() + half, half), seed);
        SimulationRecord rec = base;
        rec.dist = "kendall";
        rec.estimator = "tau";
        rec.kappa_hat = r.estimate;
        rec.sigma2_hat = r.sigma2_hat;
        rec.se_sigma2 = r.se_sigma2;
        rec.n = r.n;
        out.push_back(rec);
    }
    return out;
}

} // namespace

std::vector<SimulationRecord> run_grid(const SimulationConfig& cfg) {
    cfg.validate();
    std::vector<ConcordanceInducing> dists;
    for (const auto& d : cfg.distributions) {
        dists.push_back(parse_distribution(d).g);
    }
    std::vector<Cell> cells;
    for (std::size_t f = 0; f < cfg.copula_families.size(); ++f) {
        for (std::size_t k = 0; k < cfg.grid_points; ++k) {
            if (!cfg.only_k.empty() && std::find(cfg.only_k.begin(), cfg.only_k.end(), k) == cfg.only_k.end()) {
                continue;
            }
            cells.push_back({f, k});
        }
    }

    std::vector<std::vector<SimulationRecord>> results(cells.size());
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    const auto worker = [&] {
        for (std::size_t i = next++; i < cells.size(); i = next++) {
            try {
                results[i] = run_cell(cfg, dists, cells[i]);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        }
    };
    unsigned threads = cfg.threads ? cfg.threads : std::thread::hardware_concurrency();
    threads = std::clamp<unsigned>(threads, 1, static_cast<unsigned>(cells.size()));
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < threads; ++t) {
            pool.emplace_back(worker);
        }
        for (auto& t : pool) {
            t.join();
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }

    std::vector<SimulationRecord> out;
    for (auto& r : results) {
        out.insert(out.end(), std::make_move_iterator(r.begin()), std::make_move_iterator(r.end()));
    }
    return out;
}

void write_csv(std::ostream& out, const std::vector<SimulationRecord>& records) {
    out << kSimulationCsvHeader << '\n';
    for (const auto& r : records) {
        out << r.family << ',' << r.k << ',' << format_number(r.rho) << ','
            << (r.theta_or_nu ? format_number(*r.theta_or_nu) : "NA") << ',' << r.dist << ','
            << (r.shifted ? 1 : 0) << ',' << r.estimator << ',' << format_number(r.kappa_hat) << ','
            << format_number(r.sigma2_hat) << ',' << format_number(r.se_sigma2) << ',' << r.n << ','
            << r.seed << '\n';
    }
}

CltSummary clt_replication(const ConcordanceInducing& g, const Copula& c, std::size_t n,
                           std::size_t reps, std::uint64_t base_seed) {
    if (reps < 30) {
        throw ContractError("clt_replication needs reps >= 30");
    }
    Moments m;
    for (std::size_t r = 0; r < reps; ++r) {
        const std::uint64_t seed = mix_seed({base_seed, r});
        m.push(estimate_kappa(g, sample(c, n, seed), seed).estimate);
    }
    CltSummary s;
    s.mean = m.mean();
    s.variance = m.sample_variance();
    s.reps = reps;
    s.n = n;
    if (const auto sigma2 = analytics::sigma2_closed_form(g, c)) {
        s.reference = *sigma2 / static_cast<double>(n);
    }
    return s;
}

} // namespace concord
