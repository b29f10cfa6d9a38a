#include "concord/estimation.hpp"

#include "concord/errors.hpp"
#include "concord/special_functions.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace concord {

void Moments::push(double x) {
    const double n1 = static_cast<double>(n_);
    ++n_;
    const double n = static_cast<double>(n_);
    const double delta = x - mean_;
    const double delta_n = delta / n;
    const double delta_n2 = delta_n * delta_n;
    const double term1 = delta * delta_n * n1;
    mean_ += delta_n;
    m4_ += term1 * delta_n2 * (n * n - 3.0 * n + 3.0) + 6.0 * delta_n2 * m2_ - 4.0 * delta_n * m3_;
    m3_ += term1 * delta_n * (n - 2.0) - 3.0 * delta_n * m2_;
    m2_ += term1;
}

void Moments::merge(const Moments& other) {
    if (other.n_ == 0) {
        return;
    }
    if (n_ == 0) {
        *this = other;
        return;
    }
    const double na = static_cast<double>(n_);
    const double nb = static_cast<double>(other.n_);
    const double n = na + nb;
    const double delta = other.mean_ - mean_;
    const double d2 = delta * delta;
    const double d3 = d2 * delta;
    const double d4 = d2 * d2;

    const double m2 = m2_ + other.m2_ + d2 * na * nb / n;
    const double m3 = m3_ + other.m3_ + d3 * na * nb * (na - nb) / (n * n) +
                      3.0 * delta * (na * other.m2_ - nb * m2_) / n;
    const double m4 = m4_ + other.m4_ +
                      d4 * na * nb * (na * na - na * nb + nb * nb) / (n * n * n) +
                      6.0 * d2 * (na * na * other.m2_ + nb * nb * m2_) / (n * n) +
                      4.0 * delta * (na * other.m3_ - nb * m3_) / n;
    mean_ = (na * mean_ + nb * other.mean_) / n;
    m2_ = m2;
    m3_ = m3;
    m4_ = m4;
    n_ += other.n_;
}

double Moments::sample_variance() const {
    return n_ < 2 ? 0.0 : std::max(0.0, m2_ / static_cast<double>(n_ - 1));
}

double Moments::central2() const {
    return n_ == 0 ? 0.0 : m2_ / static_cast<double>(n_);
}

double Moments::central4() const {
    return n_ == 0 ? 0.0 : m4_ / static_cast<double>(n_);
}

double Moments::variance_standard_error() const {
    if (n_ < 2) {
        return 0.0;
    }
    const double c2 = central2();
    return std::sqrt(std::max(0.0, central4() - c2 * c2) / static_cast<double>(n_));
}

namespace {

void check_pairs(std::span<const UV> pairs, std::size_t minimum, const char* op) {
    if (pairs.size() < minimum) {
        throw ContractError(std::string(op) + ": need at least " + std::to_string(minimum) +
                            " pairs, got " + std::to_string(pairs.size()));
    }
}

EstimationResult summarize(const Moments& m, std::uint64_t seed, std::string id) {
    EstimationResult r;
    r.estimate = m.mean();
    r.sigma2_hat = m.sample_variance();
    r.se_sigma2 = m.variance_standard_error();
    r.n = m.count();
    r.seed = seed;
    r.estimator_id = std::move(id);
    return r;
}

void transform(const ConcordanceInducing& g, std::span<const UV> pairs, std::vector<double>& x,
               std::vector<double>& y) {
    std::vector<double> u(pairs.size());
    std::vector<double> v(pairs.size());
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        if (!(pairs[i].u > 0.0 && pairs[i].u < 1.0 && pairs[i].v > 0.0 && pairs[i].v < 1.0)) {
            throw ContractError("estimation: pairs must lie in the open unit square");
        }
        u[i] = pairs[i].u;
        v[i] = pairs[i].v;
    }
    x.resize(pairs.size());
    y.resize(pairs.size());
    g.quantiles(u, x);
    g.quantiles(v, y);
}

} // namespace

EstimationResult estimate_kappa_from_scores(std::span<const double> x, std::span<const double> y,
                                            double shift, std::uint64_t seed, std::string id) {
    if (x.size() != y.size() || x.size() < 2) {
        throw ContractError("estimate_kappa: need two score vectors of equal length >= 2");
    }
    Moments m;
    for (std::size_t i = 0; i < x.size(); ++i) {
        m.push(x[i] * y[i]);
    }
    auto r = summarize(m, seed, std::move(id));
    r.estimate -= shift * shift;
    return r;
}

EstimationResult estimate_kappa(const ConcordanceInducing& g, std::span<const UV> pairs,
                                std::uint64_t seed) {
    check_pairs(pairs, 2, "estimate_kappa");
    std::vector<double> x;
    std::vector<double> y;
    transform(g, pairs, x, y);
    return estimate_kappa_from_scores(x, y, g.shift(), seed, "kappa:" + g.name());
}

EstimationResult estimate_tau(std::span<const UV> pairs, std::span<const UV> independent_copy,
                              std::uint64_t seed) {
    if (pairs.size() != independent_copy.size()) {
        throw ContractError("estimate_tau: samples must have equal length");
    }
    check_pairs(pairs, 2, "estimate_tau");
    Moments m;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        m.push(kendall_sign(pairs[i].u, independent_copy[i].u) *
               kendall_sign(pairs[i].v, independent_copy[i].v));
    }
    return summarize(m, seed, "tau");
}

EstimationResult estimate_tau_overlap(std::span<const UV> pairs, std::uint64_t seed) {
    check_pairs(pairs, 3, "estimate_tau_overlap");
    const std::size_t n = pairs.size() - 1;
    std::vector<double> z(n);
    Moments m;
    for (std::size_t i = 0; i < n; ++i) {
        z[i] = kendall_sign(pairs[i].u, pairs[i + 1].u) * kendall_sign(pairs[i].v, pairs[i + 1].v);
        m.push(z[i]);
    }
    double lag = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        lag += (z[i] - m.mean()) * (z[i + 1] - m.mean());
    }
    lag /= static_cast<double>(n - 1);
    auto r = summarize(m, seed, "tau-overlap");
    const double sigma2 = r.sigma2_hat + 2.0 * lag;
    r.variance_floored = sigma2 < 0.0;
    r.sigma2_hat = std::max(0.0, sigma2);
    return r;
}

ShiftEstimate optimal_shift_from_scores(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) {
        throw ContractError("optimal shift: need two score vectors of equal length >= 2");
    }
    const std::size_t n = x.size();
    double mean_p = 0.0;
    double mean_s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mean_p += x[i] * y[i];
        mean_s += x[i] + y[i];
    }
    mean_p /= static_cast<double>(n);
    mean_s /= static_cast<double>(n);
    double cov = 0.0;
    double var_s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dp = x[i] * y[i] - mean_p;
        const double ds = x[i] + y[i] - mean_s;
        cov += dp * ds;
        var_s += ds * ds;
    }
    const double denom = static_cast<double>(n - 1);
    cov /= denom;
    var_s /= denom;

    ShiftEstimate out;
    out.var_sum = var_s;
    if (var_s < 1e-12) {
        return out;
    }
    out.mu = -cov / var_s;
    // delta method around the covariance: se(mu) = sd(dp * ds) / (sqrt(n) Var(S))
    Moments cross;
    for (std::size_t i = 0; i < n; ++i) {
        cross.push((x[i] * y[i] - mean_p) * (x[i] + y[i] - mean_s));
    }
    out.se = std::sqrt(cross.sample_variance() / static_cast<double>(n)) / var_s;
    return out;
}

ShiftEstimate estimate_optimal_shift_detailed(const ConcordanceInducing& g,
                                              std::span<const UV> pairs) {
    if (g.is_shifted()) {
        throw ContractError("estimate_optimal_shift needs an unshifted law");
    }
    check_pairs(pairs, 2, "estimate_optimal_shift");
    std::vector<double> x;
    std::vector<double> y;
    transform(g, pairs, x, y);
    return optimal_shift_from_scores(x, y);
}

double estimate_optimal_shift(const ConcordanceInducing& g, std::span<const UV> pairs) {
    return estimate_optimal_shift_detailed(g, pairs).mu;
}

std::pair<double, double> confidence_interval(const EstimationResult& r, double level) {
    if (!(level > 0.0 && level < 1.0)) {
        throw ContractError("confidence level must lie in (0,1)");
    }
    if (r.n < 2) {
        throw ContractError("confidence_interval: need n >= 2");
    }
    if (r.sigma2_hat <= 0.0) {
        return {r.estimate, r.estimate};
    }
    const double z = special::normal_quantile(0.5 * (1.0 + level));
    const double half = z * std::sqrt(r.sigma2_hat / static_cast<double>(r.n));
    return {r.estimate - half, r.estimate + half};
}

} // namespace concord
