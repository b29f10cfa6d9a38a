#include "concord/copulas.hpp"

#include "concord/errors.hpp"
#include "concord/format.hpp"
#include "concord/special_functions.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace concord {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

constexpr double kClaytonIndependenceThreshold = 1e-8;
constexpr double kOneBelow = 1.0 - 0x1p-53;

double clamp_open(double x) {
    return std::clamp(x, 0x1p-1074, kOneBelow);
}

double standard_normal(Rng& rng) {
    std::normal_distribution<double> dist;
    return dist(rng);
}

double softplus(double x) {
    return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

double clayton_cdf(double theta, double u, double v) {
    if (u <= 0.0 || v <= 0.0) return 0.0;
    if (u >= 1.0) return v;
    if (v >= 1.0) return u;
    if (theta > 0.0) {
        // log C = -(1/theta) log(u^-theta + v^-theta - 1), evaluated without overflow
        const double a = -theta * std::log(u);
        const double b = -theta * std::log(v);
        const double hi = std::max(a, b);
        const double s = hi + std::log1p(std::exp(std::min(a, b) - hi));
        const double log_inner = s + std::log1p(-std::exp(-s));
        return std::exp(-log_inner / theta);
    }
    const double inner = std::pow(u, -theta) + std::pow(v, -theta) - 1.0;
    if (inner <= 0.0) return 0.0;
    return std::pow(inner, -1.0 / theta);
}

UV clayton_draw(double theta, Rng& rng) {
    if (theta > 0.0) {
        // Marshall-Olkin: frailty V ~ Gamma(1/theta), U_j = (1 + E_j / V)^(-1/theta)
        const double shape = 1.0 / theta;
        double log_frailty;
        if (shape < 1.0) {
            std::gamma_distribution<double> g(shape + 1.0, 1.0);
            log_frailty = std::log(g(rng)) + std::log(open_unit(rng)) / shape;
        } else {
            std::gamma_distribution<double> g(shape, 1.0);
            log_frailty = std::log(g(rng));
        }
        const auto coordinate = [&] {
            const double e = -std::log(open_unit(rng));
            return clamp_open(std::exp(-softplus(std::log(e) - log_frailty) / theta));
        };
        const double u = coordinate();
        const double v = coordinate();
        return {u, v};
    }
    // conditional inversion of dC/du for theta in (-1, 0)
    const double u = open_unit(rng);
    const double w = open_unit(rng);
    const double base = std::pow(w * std::pow(u, 1.0 + theta), -theta / (1.0 + theta)) -
                        std::pow(u, -theta) + 1.0;
    return {u, clamp_open(std::pow(base, -1.0 / theta))};
}

double shuffle_cdf(const families::Shuffle& s, double u, double v) {
    double total = 0.0;
    const auto& b = s.spec.breakpoints;
    for (std::size_t i = 0; i < s.spec.n(); ++i) {
        const double width = b[i + 1] - b[i];
        const double tu = std::clamp((u - b[i]) / width, 0.0, 1.0);
        const double sv = std::clamp((v - s.target_lo[i]) / width, 0.0, 1.0);
        double share;
        if (s.spec.flips[i] == 1) {
            share = std::max(0.0, tu - (1.0 - sv));
        } else {
            share = std::min(tu, sv);
        }
        total += width * share;
    }
    return std::clamp(total, 0.0, 1.0);
}

UV shuffle_draw(const families::Shuffle& s, Rng& rng) {
    const double u = open_unit(rng);
    const auto& b = s.spec.breakpoints;
    auto it = std::upper_bound(b.begin() + 1, b.end(), u);
    std::size_t i = static_cast<std::size_t>(it - b.begin()) - 1;
    i = std::min(i, s.spec.n() - 1);
    const double width = b[i + 1] - b[i];
    const double t = (u - b[i]) / width;
    const double v = s.spec.flips[i] == 1 ? s.target_lo[i] + (1.0 - t) * width
                                          : s.target_lo[i] + t * width;
    return {u, clamp_open(v)};
}

void gaussian_pair(double rho, Rng& rng, double& z1, double& z2) {
    z1 = standard_normal(rng);
    const double e = standard_normal(rng);
    z2 = rho * z1 + std::sqrt((1.0 - rho) * (1.0 + rho)) * e;
}

} // namespace

void FrechetWeights::validate() const {
    if (p_m < 0.0 || p_pi < 0.0 || p_w < 0.0) {
        throw ContractError("Frechet weights must be non-negative");
    }
    if (std::abs(p_m + p_pi + p_w - 1.0) > 1e-12) {
        throw ContractError("Frechet weights must sum to 1");
    }
}

void ShuffleSpec::validate() const {
    const std::size_t n = permutation.size();
    if (n == 0) {
        throw ContractError("shuffle: need at least one strip");
    }
    if (breakpoints.size() != n + 1 || flips.size() != n) {
        throw ContractError("shuffle: need n+1 breakpoints and n flips");
    }
    if (breakpoints.front() != 0.0 || breakpoints.back() != 1.0) {
        throw ContractError("shuffle: breakpoints must start at 0 and end at 1");
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (!(breakpoints[i + 1] > breakpoints[i])) {
            throw ContractError("shuffle: breakpoints must be strictly increasing");
        }
    }
    std::vector<int> sorted = permutation;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < n; ++i) {
        if (sorted[i] != static_cast<int>(i + 1)) {
            throw ContractError("shuffle: permutation must be a bijection on 1..n");
        }
    }
    for (const int f : flips) {
        if (f != 1 && f != -1) {
            throw ContractError("shuffle: flips must be -1 or +1");
        }
    }
}

ShuffleSpec ShuffleSpec::equal_strips(std::vector<int> permutation, std::vector<int> flips) {
    ShuffleSpec spec;
    const std::size_t n = permutation.size();
    for (std::size_t i = 0; i <= n; ++i) {
        spec.breakpoints.push_back(static_cast<double>(i) / static_cast<double>(n));
    }
    spec.permutation = std::move(permutation);
    spec.flips = std::move(flips);
    return spec;
}

double open_unit(Rng& rng) {
    // (k + 1/2) 2^-52 keeps both u and 1 - u exactly representable
    const std::uint64_t k = rng() >> 12;
    return (static_cast<double>(k) + 0.5) * 0x1p-52;
}

std::string Copula::describe() const {
    return std::visit(
        Overloaded{
            [](const families::Comonotone&) -> std::string { return "M"; },
            [](const families::Countermonotone&) -> std::string { return "W"; },
            [](const families::Independence&) -> std::string { return "Pi"; },
            [](const families::Frechet& f) -> std::string {
                return "frechet:" + format_number(f.w.p_m) + "," + format_number(f.w.p_pi) + "," +
                       format_number(f.w.p_w);
            },
            [](const families::Gaussian& g) -> std::string { return "gauss:" + format_number(g.rho); },
            [](const families::StudentT& t) -> std::string {
                return "t:" + format_number(t.rho) + "," + format_number(t.nu);
            },
            [](const families::Clayton& c) -> std::string { return "clayton:" + format_number(c.theta); },
            [](const families::Shuffle& s) -> std::string {
                std::string out = "shuffle:" + std::to_string(s.spec.n()) + ":";
                for (std::size_t i = 0; i < s.spec.n(); ++i) {
                    out += (i ? "," : "") + std::to_string(s.spec.permutation[i]);
                }
                out += ":";
                for (std::size_t i = 0; i < s.spec.n(); ++i) {
                    out += (i ? "," : "") + std::to_string(s.spec.flips[i]);
                }
                return out;
            },
            [](const families::Reflected& r) -> std::string {
                const char* tag = r.phi == Reflection::nu1 ? "nu1" : r.phi == Reflection::nu2 ? "nu2" : "nu1nu2";
                return r.base->describe() + "+" + tag;
            }},
        family_);
}

bool Copula::cdf_available() const {
    return std::visit(Overloaded{[](const families::StudentT&) { return false; },
                                 [](const families::Reflected& r) { return r.base->cdf_available(); },
                                 [](const auto&) { return true; }},
                      family_);
}

double Copula::cdf(double u, double v) const {
    if (!(u >= 0.0 && u <= 1.0 && v >= 0.0 && v <= 1.0)) {
        throw ContractError("copula cdf arguments must lie in [0,1]");
    }
    return std::visit(
        Overloaded{
            [&](const families::Comonotone&) { return std::min(u, v); },
            [&](const families::Countermonotone&) { return std::max(u + v - 1.0, 0.0); },
            [&](const families::Independence&) { return u * v; },
            [&](const families::Frechet& f) {
                return f.w.p_m * std::min(u, v) + f.w.p_pi * u * v +
                       f.w.p_w * std::max(u + v - 1.0, 0.0);
            },
            [&](const families::Gaussian& g) {
                if (u == 0.0 || v == 0.0) return 0.0;
                if (u == 1.0) return v;
                if (v == 1.0) return u;
                if (g.rho >= 1.0) return std::min(u, v);
                if (g.rho <= -1.0) return std::max(u + v - 1.0, 0.0);
                return special::bivariate_normal_cdf(special::normal_quantile(u),
                                                     special::normal_quantile(v), g.rho);
            },
            [&](const families::StudentT&) -> double {
                throw CapabilityError("the Student t copula has no closed-form CDF here; "
                                      "use p_balance or tau_closed_form for its center values");
            },
            [&](const families::Clayton& c) {
                if (c.theta <= -1.0) return std::max(u + v - 1.0, 0.0);
                if (std::abs(c.theta) < kClaytonIndependenceThreshold) return u * v;
                return clayton_cdf(c.theta, u, v);
            },
            [&](const families::Shuffle& s) { return shuffle_cdf(s, u, v); },
            [&](const families::Reflected& r) {
                const Copula& base = *r.base;
                double value = 0.0;
                switch (r.phi) {
                case Reflection::nu1: value = v - base.cdf(1.0 - u, v); break;
                case Reflection::nu2: value = u - base.cdf(u, 1.0 - v); break;
                case Reflection::nu1nu2: value = u + v - 1.0 + base.cdf(1.0 - u, 1.0 - v); break;
                }
                return std::clamp(value, 0.0, 1.0);
            }},
        family_);
}

UV Copula::draw(Rng& rng) const {
    return std::visit(
        Overloaded{
            [&](const families::Comonotone&) {
                const double u = open_unit(rng);
                return UV{u, u};
            },
            [&](const families::Countermonotone&) {
                const double u = open_unit(rng);
                return UV{u, 1.0 - u};
            },
            [&](const families::Independence&) {
                const double u = open_unit(rng);
                return UV{u, open_unit(rng)};
            },
            [&](const families::Frechet& f) {
                const double r = open_unit(rng);
                const double u = open_unit(rng);
                if (r < f.w.p_m) return UV{u, u};
                if (r < f.w.p_m + f.w.p_w) return UV{u, 1.0 - u};
                return UV{u, open_unit(rng)};
            },
            [&](const families::Gaussian& g) {
                if (g.rho >= 1.0 || g.rho <= -1.0) {
                    const double u = open_unit(rng);
                    return UV{u, g.rho > 0 ? u : 1.0 - u};
                }
                double z1 = 0.0;
                double z2 = 0.0;
                gaussian_pair(g.rho, rng, z1, z2);
                return UV{clamp_open(special::normal_cdf(z1)), clamp_open(special::normal_cdf(z2))};
            },
            [&](const families::StudentT& t) {
                if (t.rho >= 1.0 || t.rho <= -1.0) {
                    const double u = open_unit(rng);
                    return UV{u, t.rho > 0 ? u : 1.0 - u};
                }
                double z1 = 0.0;
                double z2 = 0.0;
                gaussian_pair(t.rho, rng, z1, z2);
                std::chi_squared_distribution<double> chi2(t.nu);
                const double scale = 1.0 / std::sqrt(chi2(rng) / t.nu);
                return UV{clamp_open(special::student_t_cdf(z1 * scale, t.nu)),
                          clamp_open(special::student_t_cdf(z2 * scale, t.nu))};
            },
            [&](const families::Clayton& c) {
                if (c.theta <= -1.0) {
                    const double u = open_unit(rng);
                    return UV{u, 1.0 - u};
                }
                if (std::abs(c.theta) < kClaytonIndependenceThreshold) {
                    const double u = open_unit(rng);
                    return UV{u, open_unit(rng)};
                }
                return clayton_draw(c.theta, rng);
            },
            [&](const families::Shuffle& s) { return shuffle_draw(s, rng); },
            [&](const families::Reflected& r) {
                const UV p = r.base->draw(rng);
                switch (r.phi) {
                case Reflection::nu1: return UV{1.0 - p.u, p.v};
                case Reflection::nu2: return UV{p.u, 1.0 - p.v};
                case Reflection::nu1nu2: return UV{1.0 - p.u, 1.0 - p.v};
                }
                return p;
            }},
        family_);
}

Copula comonotone() { return Copula(families::Comonotone{}); }
Copula countermonotone() { return Copula(families::Countermonotone{}); }
Copula independence() { return Copula(families::Independence{}); }

Copula frechet(const FrechetWeights& w) {
    w.validate();
    return Copula(families::Frechet{w});
}

Copula gaussian(double rho) {
    if (!(rho >= -1.0 && rho <= 1.0)) {
        throw ContractError("Gaussian copula correlation must lie in [-1,1]");
    }
    return Copula(families::Gaussian{rho});
}

Copula student_t_copula(double rho, double nu) {
    if (!(rho >= -1.0 && rho <= 1.0)) {
        throw ContractError("t copula correlation must lie in [-1,1]");
    }
    if (!(nu > 0.0)) {
        throw ContractError("t copula degrees of freedom must be positive");
    }
    return Copula(families::StudentT{rho, nu});
}

Copula clayton(double theta) {
    if (!(theta >= -1.0) || !std::isfinite(theta)) {
        throw ContractError("Clayton parameter must satisfy theta >= -1");
    }
    if (theta == -1.0) {
        return countermonotone();
    }
    if (std::abs(theta) < kClaytonIndependenceThreshold) {
        return independence();
    }
    return Copula(families::Clayton{theta});
}

Copula shuffle_of_m(const ShuffleSpec& spec) {
    spec.validate();
    const std::size_t n = spec.n();
    std::vector<double> width_at_position(n + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        width_at_position[static_cast<std::size_t>(spec.permutation[i])] =
            spec.breakpoints[i + 1] - spec.breakpoints[i];
    }
    std::vector<double> position_lo(n + 2, 0.0);
    for (std::size_t j = 1; j <= n; ++j) {
        position_lo[j + 1] = position_lo[j] + width_at_position[j];
    }
    families::Shuffle s{spec, {}};
    for (std::size_t i = 0; i < n; ++i) {
        const auto j = static_cast<std::size_t>(spec.permutation[i]);
        // equal strips land exactly on the source breakpoints
        const bool aligned = std::abs(spec.breakpoints[j - 1] - position_lo[j]) < 1e-15;
        s.target_lo.push_back(aligned ? spec.breakpoints[j - 1] : position_lo[j]);
    }
    return Copula(std::move(s));
}

Copula reflect(const Copula& c, Reflection phi) {
    return Copula(families::Reflected{std::make_shared<const Copula>(c), phi});
}

std::vector<UV> sample(const Copula& c, std::size_t n, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<UV> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        out.push_back(c.draw(rng));
    }
    return out;
}

double rectangle_volume(const Copula& c, double u1, double u2, double v1, double v2) {
    if (!(0.0 <= u1 && u1 <= u2 && u2 <= 1.0 && 0.0 <= v1 && v1 <= v2 && v2 <= 1.0)) {
        throw ContractError("rectangle_volume: need 0 <= u1 <= u2 <= 1 and 0 <= v1 <= v2 <= 1");
    }
    const double vol = c.cdf(u2, v2) - c.cdf(u1, v2) - c.cdf(u2, v1) + c.cdf(u1, v1);
    return std::clamp(vol, 0.0, 1.0);
}

double survival_at_center(const Copula& c) {
    return std::visit(
        Overloaded{
            [](const families::Gaussian& g) {
                return 0.25 + std::asin(std::clamp(g.rho, -1.0, 1.0)) / (2.0 * std::numbers::pi);
            },
            [](const families::StudentT& t) {
                return 0.25 + std::asin(std::clamp(t.rho, -1.0, 1.0)) / (2.0 * std::numbers::pi);
            },
            [](const families::Reflected& r) {
                const double base = survival_at_center(*r.base);
                return r.phi == Reflection::nu1nu2 ? base : 0.5 - base;
            },
            [&c](const auto&) { return c.cdf(0.5, 0.5); }},
        c.family());
}

double p_balance(const Copula& c) {
    return 2.0 * survival_at_center(c);
}

} // namespace concord
