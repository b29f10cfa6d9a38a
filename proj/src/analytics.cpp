#include "concord/analytics.hpp"

#include "concord/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace concord::analytics {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

constexpr double kParameterLimit = 1e-8;

double elliptical_tau(double rho) {
    return 2.0 / std::numbers::pi * std::asin(std::clamp(rho, -1.0, 1.0));
}

struct DiscreteSums {
    double kappa = 0.0;
    double second = 0.0; // E[(XY)^2]
};

DiscreteSums discrete_sums(const std::vector<QuantileInterval>& parts, const Copula& c) {
    DiscreteSums sums;
    for (const auto& a : parts) {
        if (a.hi <= a.lo || a.value == 0.0) {
            continue;
        }
        for (const auto& b : parts) {
            if (b.hi <= b.lo || b.value == 0.0) {
                continue;
            }
            const double vol = rectangle_volume(c, a.lo, a.hi, b.lo, b.hi);
            const double prod = a.value * b.value;
            sums.kappa += prod * vol;
            sums.second += prod * prod * vol;
        }
    }
    return sums;
}

void require_unshifted(const ConcordanceInducing& g, const char* op) {
    if (g.is_shifted()) {
        throw ContractError(std::string(op) + " needs an unshifted law, got " + g.name());
    }
}

} // namespace

void MixtureMoments::validate() const {
    if (!(e_w > 0.0) || !(e_w2 > 0.0)) {
        throw ContractError("mixture moments must be positive");
    }
    if (e_w2 < e_w * e_w * (1.0 - 1e-12)) {
        throw ContractError("mixture moments violate E[W^2] >= E[W]^2");
    }
}

double sigma2_from_covariances(double cov_x2y2, double cov_xy) {
    return cov_x2y2 + 1.0 - cov_xy * cov_xy;
}

double sigma2_frechet(const ConcordanceInducing& g, const FrechetWeights& w) {
    require_unshifted(g, "sigma2_frechet");
    w.validate();
    const double diff = w.p_m - w.p_w;
    return (w.p_m + w.p_w) * g.var_x_squared() + 1.0 - diff * diff;
}

double kappa_frechet(const FrechetWeights& w) {
    return w.p_m - w.p_w;
}

double tau_frechet(const FrechetWeights& w) {
    return (w.p_m - w.p_w) * (w.p_m + w.p_w + 2.0) / 3.0;
}

VarianceEnvelope envelope_frechet(const ConcordanceInducing& g) {
    require_unshifted(g, "envelope_frechet");
    const double v = g.var_x_squared();
    constexpr double tie = 1e-12;
    VarianceEnvelope env;
    env.best = std::min(1.0, v);
    env.worst = 1.0 + v;
    if (v < 1.0 - tie) {
        env.best_attainers = {Attainer::comonotone, Attainer::countermonotone};
    } else if (v <= 1.0 + tie) {
        env.best_attainers = {Attainer::comonotone, Attainer::independence, Attainer::countermonotone};
    } else {
        env.best_attainers = {Attainer::independence};
    }
    if (v > tie) {
        env.worst_attainers = {Attainer::mid_mw};
    } else {
        env.worst_attainers = {Attainer::mid_mw_pi_segment};
    }
    return env;
}

Preference prefer(const ConcordanceInducing& g, const ConcordanceInducing& g_prime) {
    require_unshifted(g, "prefer");
    require_unshifted(g_prime, "prefer");
    const double a = g.var_x_squared();
    const double b = g_prime.var_x_squared();
    if (std::abs(a - b) <= 1e-12) {
        return Preference::equivalent;
    }
    return a < b ? Preference::first : Preference::second;
}

double beta(const Copula& c) {
    return 2.0 * p_balance(c) - 1.0;
}

double sigma2_beta(const Copula& c) {
    const double p = p_balance(c);
    return 4.0 * p * (1.0 - p);
}

double tau_closed_form(const Copula& c) {
    return std::visit(
        Overloaded{
            [](const families::Comonotone&) { return 1.0; },
            [](const families::Countermonotone&) { return -1.0; },
            [](const families::Independence&) { return 0.0; },
            [](const families::Frechet& f) { return tau_frechet(f.w); },
            [](const families::Gaussian& g) { return elliptical_tau(g.rho); },
            [](const families::StudentT& t) { return elliptical_tau(t.rho); },
            [](const families::Clayton& cl) {
                if (std::abs(cl.theta) < kParameterLimit) return 0.0;
                return cl.theta / (cl.theta + 2.0);
            },
            [&c](const families::Shuffle&) -> double {
                throw CapabilityError("no closed form for Kendall's tau of " + c.describe());
            },
            [](const families::Reflected& r) {
                const double base = tau_closed_form(*r.base);
                return r.phi == Reflection::nu1nu2 ? base : -base;
            }},
        c.family());
}

double sigma2_tau_analytic(double tau) {
    if (!(tau >= -1.0 && tau <= 1.0)) {
        throw ContractError("Kendall's tau must lie in [-1,1]");
    }
    return 1.0 - tau * tau;
}

double beta_clayton(double theta) {
    if (!(theta >= -1.0)) {
        throw ContractError("Clayton parameter must satisfy theta >= -1");
    }
    if (std::abs(theta) < kParameterLimit) {
        return 0.0;
    }
    return 4.0 * std::pow(std::pow(2.0, theta + 1.0) - 1.0, -1.0 / theta) - 1.0;
}

double sigma2_nvm(const MixtureMoments& m, double rho) {
    m.validate();
    const double r = m.ratio();
    return (2.0 * r - 1.0) * rho * rho + r;
}

double nvm_var_x_squared(const MixtureMoments& m) {
    m.validate();
    return 3.0 * m.ratio() - 1.0;
}

double sigma2_nvm_via_var_x2(const MixtureMoments& m, double rho) {
    const double r = m.ratio();
    return (nvm_var_x_squared(m) - r) * rho * rho + r;
}

MixtureMoments student_t_mixture_moments(double nu) {
    if (!(nu > 4.0)) {
        throw ContractError("E[W^2] of the t mixing variable is finite only for nu > 4");
    }
    return {nu / (nu - 2.0), nu * nu / ((nu - 2.0) * (nu - 4.0))};
}

double optimal_shift_analytic(double cov_xy_sum, double var_sum) {
    if (var_sum <= 0.0) {
        return 0.0;
    }
    return -cov_xy_sum / var_sum;
}

double optimal_shifted_variance(double var_product, double cov_xy_sum, double var_sum) {
    if (var_sum <= 0.0) {
        return var_product;
    }
    return var_product - cov_xy_sum * cov_xy_sum / var_sum;
}

double kappa_discrete(const DiscreteSymmetricSpec& spec, const Copula& c) {
    const auto g = make_discrete(spec);
    return discrete_sums(g.partition(), c).kappa;
}

double sigma2_discrete(const DiscreteSymmetricSpec& spec, const Copula& c) {
    const auto g = make_discrete(spec);
    const auto sums = discrete_sums(g.partition(), c);
    return sums.second - sums.kappa * sums.kappa;
}

double squared_copula(const Copula& c, bool g_continuous, double u, double v) {
    if (!g_continuous) {
        throw ContractError("the copula of (X^2, Y^2) is only derived for continuous G");
    }
    if (!(u >= 0.0 && u <= 1.0 && v >= 0.0 && v <= 1.0)) {
        throw ContractError("squared_copula arguments must lie in [0,1]");
    }
    const double uu = 0.5 * (u + 1.0);
    const double vv = 0.5 * (v + 1.0);
    double total = 0.0;
    const auto add_term = [&](const Copula& reflected) {
        const double mass = rectangle_volume(reflected, 0.5, 1.0, 0.5, 1.0);
        if (mass <= 0.0) {
            return;
        }
        const double conditional = rectangle_volume(reflected, 0.5, uu, 0.5, vv) / mass;
        total += mass * conditional;
    };
    add_term(c);
    add_term(reflect(c, Reflection::nu1));
    add_term(reflect(c, Reflection::nu2));
    add_term(reflect(c, Reflection::nu1nu2));
    return std::clamp(total, 0.0, 1.0);
}

std::optional<double> sigma2_closed_form(const ConcordanceInducing& g, const Copula& c) {
    if (g.is_shifted()) {
        return std::nullopt;
    }
    const auto& fam = c.family();
    std::optional<FrechetWeights> weights;
    if (std::holds_alternative<families::Comonotone>(fam)) weights = FrechetWeights{1, 0, 0};
    if (std::holds_alternative<families::Independence>(fam)) weights = FrechetWeights{0, 1, 0};
    if (std::holds_alternative<families::Countermonotone>(fam)) weights = FrechetWeights{0, 0, 1};
    if (const auto* f = std::get_if<families::Frechet>(&fam)) weights = f->w;
    if (weights) {
        return sigma2_frechet(g, *weights);
    }
    if (std::holds_alternative<laws::Bernoulli>(g.law())) {
        return sigma2_beta(c);
    }
    if (std::holds_alternative<laws::Discrete>(g.law()) && c.cdf_available()) {
        const auto sums = discrete_sums(g.partition(), c);
        return sums.second - sums.kappa * sums.kappa;
    }
    if (const auto* gc = std::get_if<families::Gaussian>(&fam)) {
        if (std::holds_alternative<laws::Normal>(g.law())) {
            return sigma2_nvm(MixtureMoments{1.0, 1.0}, gc->rho);
        }
    }
    if (const auto* tc = std::get_if<families::StudentT>(&fam)) {
        if (const auto* tl = std::get_if<laws::StudentT>(&g.law()); tl && tl->nu == tc->nu) {
            return sigma2_nvm(student_t_mixture_moments(tc->nu), tc->rho);
        }
    }
    return std::nullopt;
}

} // namespace concord::analytics
