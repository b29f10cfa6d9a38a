#pragma once

#include "concord/copulas.hpp"
#include "concord/distributions.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <utility>

namespace concord {

/// Streaming central moments up to order four. `merge` combines shards with
/// the pairwise update formulas, so sharded accumulation reproduces a single
/// pass over the concatenated data.
class Moments {
public:
    void push(double x);
    void merge(const Moments& other);

    std::size_t count() const { return n_; }
    double mean() const { return mean_; }
    /// Unbiased sample variance (divisor n - 1).
    double sample_variance() const;
    /// Central moments with divisor n.
    double central2() const;
    double central4() const;
    /// sqrt((m4 - m2^2) / n): plug-in standard error of the variance estimate.
    double variance_standard_error() const;

private:
    std::size_t n_ = 0;
    double mean_ = 0.0;
    double m2_ = 0.0;
    double m3_ = 0.0;
    double m4_ = 0.0;
};

struct EstimationResult {
    double estimate = 0.0;
    double sigma2_hat = 0.0;
    std::size_t n = 0;
    std::uint64_t seed = 0;
    std::string estimator_id;
    double se_sigma2 = 0.0;       ///< plug-in SE of sigma2_hat
    bool variance_floored = false; ///< tau-overlap variance clipped at 0
};

/// Canonical estimator: mean of G^-(u_i) G^-(v_i), minus mu^2 for a law
/// shifted by mu. Needs n >= 2 and all pairs inside (0,1)^2.
EstimationResult estimate_kappa(const ConcordanceInducing& g, std::span<const UV> pairs,
                                std::uint64_t seed = 0);

/// Same estimator on precomputed scores x_i = G^-(u_i), y_i = G^-(v_i) of
/// a law shifted by `shift`.
EstimationResult estimate_kappa_from_scores(std::span<const double> x, std::span<const double> y,
                                            double shift, std::uint64_t seed, std::string id);

/// g(l, m) = +1 if l > m, -1 otherwise (ties count as -1).
inline double kendall_sign(double l, double m) {
    return l > m ? 1.0 : -1.0;
}

/// Kendall's tau from two independent samples of equal length.
EstimationResult estimate_tau(std::span<const UV> pairs, std::span<const UV> independent_copy,
                              std::uint64_t seed = 0);

/// Kendall's tau from overlapping consecutive pairs of n + 1 draws; the
/// variance adds twice the lag-1 autocovariance and is floored at 0.
EstimationResult estimate_tau_overlap(std::span<const UV> pairs, std::uint64_t seed = 0);

struct ShiftEstimate {
    double mu = 0.0;
    double se = 0.0;      ///< delta-method standard error of mu
    double var_sum = 0.0; ///< sample Var(X0 + Y0)
};

/// Plug-in optimal location shift -Cov(X0 Y0, X0 + Y0) / Var(X0 + Y0).
ShiftEstimate estimate_optimal_shift_detailed(const ConcordanceInducing& g,
                                              std::span<const UV> pairs);
double estimate_optimal_shift(const ConcordanceInducing& g, std::span<const UV> pairs);
/// Same, on precomputed unshifted scores.
ShiftEstimate optimal_shift_from_scores(std::span<const double> x, std::span<const double> y);

/// estimate +- z_{(1+level)/2} sqrt(sigma2_hat / n).
std::pair<double, double> confidence_interval(const EstimationResult& r, double level);

} // namespace concord
