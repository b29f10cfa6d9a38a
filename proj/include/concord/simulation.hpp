#pragma once

#include "concord/copulas.hpp"
#include "concord/distributions.hpp"

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace concord {

struct SimulationConfig {
    std::size_t grid_points = 50;
    std::size_t n = 100000;
    double nu_t_copula = 5.0;
    std::uint64_t base_seed = 1;
    std::vector<std::string> distributions = {"uniform", "beta:0.5", "normal", "t:10", "bernoulli"};
    std::vector<std::string> copula_families = {"gauss", "t", "clayton"};
    bool include_shift = true;
    bool include_tau = true;
    unsigned threads = 0; ///< 0 picks std::thread::hardware_concurrency()
    std::vector<std::size_t> only_k; ///< restrict to these grid indices; empty runs all

    void validate() const;
};

struct SimulationRecord {
    std::string family;
    std::size_t k = 0;
    double rho = 0.0;
    std::optional<double> theta_or_nu; ///< empty for the Gaussian family
    std::string dist;                  ///< "kendall" for tau records
    bool shifted = false;
    std::string estimator;             ///< kappa, tau or skip
    double kappa_hat = 0.0;
    double sigma2_hat = 0.0;
    double se_sigma2 = 0.0;
    std::size_t n = 0;
    std::uint64_t seed = 0;
    double mu_hat = 0.0;               ///< plug-in shift applied (shifted rows only)
};

/// rho_k = -0.99 + 1.98 k / (grid_points - 1).
double grid_rho(std::size_t k, std::size_t grid_points);
/// Copula of one grid cell: gauss:rho, t:rho,nu or Clayton with theta = 2 rho / (1 - rho).
Copula grid_copula(const std::string& family, double rho, double nu);

/// SplitMix64 finalizer folded over the words.
std::uint64_t mix_seed(std::initializer_list<std::uint64_t> words);

/// Records ordered by (family, k, dist, shifted), tau last within each cell.
std::vector<SimulationRecord> run_grid(const SimulationConfig& cfg);

extern const char* const kSimulationCsvHeader;
void write_csv(std::ostream& out, const std::vector<SimulationRecord>& records);

struct CltSummary {
    double mean = 0.0;
    double variance = 0.0;        ///< sample variance of the replicated estimates
    std::optional<double> reference; ///< sigma^2 / n from a closed form
    std::size_t reps = 0;
    std::size_t n = 0;
};

CltSummary clt_replication(const ConcordanceInducing& g, const Copula& c, std::size_t n,
                           std::size_t reps, std::uint64_t base_seed);

} // namespace concord
