#include "concord/distributions.hpp"

#include "concord/errors.hpp"
#include "concord/format.hpp"
#include "concord/special_functions.hpp"

#include <boost/math/special_functions/beta.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace concord {

namespace {

constexpr double kSqrt3 = 1.7320508075688772;

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

double discrete_quantile(const laws::Discrete& d, double p) {
    const auto it = std::lower_bound(d.cumulative.begin(), d.cumulative.end(), p);
    if (it == d.cumulative.end()) {
        return d.atoms.back();
    }
    return d.atoms[static_cast<std::size_t>(it - d.cumulative.begin())];
}

double discrete_cdf(const laws::Discrete& d, double x) {
    const auto it = std::upper_bound(d.atoms.begin(), d.atoms.end(), x);
    if (it == d.atoms.begin()) {
        return 0.0;
    }
    return d.cumulative[static_cast<std::size_t>(it - d.atoms.begin()) - 1];
}

double beta_quantile(const laws::SymmetricBeta& b, double p) {
    if (b.alpha == 0.5) {
        // arcsine law: Y = sin^2(pi p / 2), so Y - 1/2 = -cos(pi p) / 2
        return -0.5 * std::cos(std::numbers::pi * p) / b.sd;
    }
    if (b.alpha == 1.0) {
        return (p - 0.5) / b.sd;
    }
    const bool upper = p > 0.5;
    const double target = upper ? 1.0 - p : p;
    if (target == 0.5) {
        return 0.0;
    }
    const double a = b.alpha;
    const double y0 = std::clamp(0.5 + b.sd * special::normal_quantile(target), 1e-300, 0.5);
    const double y = special::solve_monotone(
        [a](double y) { return boost::math::ibeta(a, a, y); },
        [a](double y) { return boost::math::ibeta_derivative(a, a, y); }, target, 0.0, 0.5, y0,
        std::min(1e-12, 1e-8 * target));
    const double x = (y - 0.5) / b.sd;
    return upper ? -x : x;
}

double beta_fourth_moment(double alpha) {
    // raw moments of Beta(alpha, alpha), then the central fourth moment about 1/2
    double raw[5] = {1.0, 0.0, 0.0, 0.0, 0.0};
    for (int k = 1; k <= 4; ++k) {
        raw[k] = raw[k - 1] * (alpha + k - 1) / (2.0 * alpha + k - 1);
    }
    const double central4 = raw[4] - 2.0 * raw[3] + 1.5 * raw[2] - 0.5 * raw[1] + 0.0625;
    const double variance = 1.0 / (4.0 * (2.0 * alpha + 1.0));
    return central4 / (variance * variance);
}

} // namespace

void DiscreteSymmetricSpec::validate() const {
    const std::size_t m = z.size();
    if (m == 0) {
        throw ContractError("discrete spec: m must be positive");
    }
    if (p.size() != m + 1) {
        throw ContractError("discrete spec: p must hold m+1 probabilities (p_0, ..., p_m)");
    }
    for (std::size_t i = 0; i < m; ++i) {
        if (!(z[i] > 0.0) || (i > 0 && !(z[i] > z[i - 1]))) {
            throw ContractError("discrete spec: z must be positive and strictly increasing");
        }
    }
    for (const double pi : p) {
        if (!(pi >= 0.0)) {
            throw ContractError("discrete spec: probabilities must be non-negative");
        }
    }
    double total = p[0];
    double second = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        total += 2.0 * p[i + 1];
        second += p[i + 1] * z[i] * z[i];
    }
    if (std::abs(total - 1.0) > 1e-12) {
        throw ContractError("discrete spec: p_0 + 2 sum p_i = " + format_number(total) +
                            " violates the unit-mass constraint");
    }
    if (std::abs(second - 0.5) > 1e-12) {
        throw ContractError("discrete spec: sum p_i z_i^2 = " + format_number(second) +
                            " violates the unit-variance constraint (must be 1/2)");
    }
}

bool ConcordanceInducing::is_continuous() const {
    return std::visit(Overloaded{[](const laws::Bernoulli&) { return false; },
                                 [](const laws::Discrete&) { return false; },
                                 [](const laws::PointUniformMixture&) { return false; },
                                 [](const auto&) { return true; }},
                      law_);
}

double ConcordanceInducing::base_quantile(double p) const {
    return std::visit(
        Overloaded{
            [p](const laws::Uniform&) { return kSqrt3 * (2.0 * p - 1.0); },
            [p](const laws::Bernoulli&) { return p > 0.5 ? 1.0 : -1.0; },
            [p](const laws::Normal&) { return special::normal_quantile(p); },
            [p](const laws::StudentT& t) { return t.scale * special::student_t_quantile(p, t.nu); },
            [p](const laws::SymmetricBeta& b) { return beta_quantile(b, p); },
            [p](const laws::Discrete& d) { return discrete_quantile(d, p); },
            [p](const laws::PointUniformMixture&) {
                const double a = std::sqrt(6.0);
                if (p <= 0.25) return 4.0 * a * p - a;
                if (p <= 0.75) return 0.0;
                return 4.0 * a * p - 3.0 * a;
            }},
        law_);
}

double ConcordanceInducing::quantile(double p) const {
    if (!(p > 0.0 && p < 1.0)) {
        throw ContractError("quantile: p = " + format_number(p) + " is outside (0,1)");
    }
    return base_quantile(p) + shift_;
}

void ConcordanceInducing::quantiles(std::span<const double> p, std::span<double> out) const {
    const double mu = shift_;
    std::visit(
        [&](const auto& law) {
            using L = std::decay_t<decltype(law)>;
            for (std::size_t i = 0; i < p.size(); ++i) {
                const double u = p[i];
                double x;
                if constexpr (std::is_same_v<L, laws::Uniform>) {
                    x = kSqrt3 * (2.0 * u - 1.0);
                } else if constexpr (std::is_same_v<L, laws::Bernoulli>) {
                    x = u > 0.5 ? 1.0 : -1.0;
                } else if constexpr (std::is_same_v<L, laws::Normal>) {
                    x = special::normal_quantile(u);
                } else {
                    x = base_quantile(u);
                }
                out[i] = x + mu;
            }
        },
        law_);
}

double ConcordanceInducing::cdf(double x) const {
    const double y = x - shift_;
    return std::visit(
        Overloaded{
            [y](const laws::Uniform&) { return std::clamp((y + kSqrt3) / (2.0 * kSqrt3), 0.0, 1.0); },
            [y](const laws::Bernoulli&) { return y < -1.0 ? 0.0 : (y < 1.0 ? 0.5 : 1.0); },
            [y](const laws::Normal&) { return special::normal_cdf(y); },
            [y](const laws::StudentT& t) { return special::student_t_cdf(y / t.scale, t.nu); },
            [y](const laws::SymmetricBeta& b) {
                const double v = std::clamp(0.5 + b.sd * y, 0.0, 1.0);
                return boost::math::ibeta(b.alpha, b.alpha, v);
            },
            [y](const laws::Discrete& d) { return discrete_cdf(d, y); },
            [y](const laws::PointUniformMixture&) {
                const double a = std::sqrt(6.0);
                const double cont = std::clamp((y + a) / (2.0 * a), 0.0, 1.0);
                return 0.5 * cont + (y >= 0.0 ? 0.5 : 0.0);
            }},
        law_);
}

double ConcordanceInducing::fourth_moment() const {
    if (shifted_) {
        throw ContractError("fourth moment is not tracked for shifted law " + name_);
    }
    return fourth_moment_;
}

double ConcordanceInducing::var_x_squared() const {
    return fourth_moment() - 1.0;
}

const std::vector<QuantileInterval>& ConcordanceInducing::partition() const {
    if (partition_.empty()) {
        throw ContractError("partition is only defined for discrete laws built from a spec");
    }
    return partition_;
}

ConcordanceInducing make_uniform() {
    return {"uniform", laws::Uniform{}, SupportKind::bounded, 9.0 / 5.0};
}

ConcordanceInducing make_bernoulli() {
    return {"bernoulli", laws::Bernoulli{}, SupportKind::discrete, 1.0};
}

ConcordanceInducing make_normal() {
    return {"normal", laws::Normal{}, SupportKind::unbounded, 3.0};
}

ConcordanceInducing make_student_t(double nu) {
    if (!(nu > 4.0)) {
        throw ContractError("student t with nu = " + format_number(nu) +
                            " has an infinite fourth moment; need nu > 4");
    }
    return {"t:" + format_number(nu), laws::StudentT{nu, std::sqrt((nu - 2.0) / nu)},
            SupportKind::unbounded, 3.0 * (nu - 2.0) / (nu - 4.0)};
}

ConcordanceInducing make_symmetric_beta(double alpha) {
    if (!(alpha > 0.0) || !std::isfinite(alpha)) {
        throw ContractError("beta shape must be positive and finite");
    }
    const double sd = std::sqrt(1.0 / (4.0 * (2.0 * alpha + 1.0)));
    return {"beta:" + format_number(alpha), laws::SymmetricBeta{alpha, sd}, SupportKind::bounded,
            beta_fourth_moment(alpha)};
}

ConcordanceInducing make_beta(double alpha, double beta) {
    if (alpha != beta) {
        throw ContractError("Beta(" + format_number(alpha) + ", " + format_number(beta) +
                            ") is not radially symmetric; shapes must be equal");
    }
    return make_symmetric_beta(alpha);
}

ConcordanceInducing make_builtin(BuiltinKind kind, double parameter) {
    switch (kind) {
    case BuiltinKind::uniform: return make_uniform();
    case BuiltinKind::bernoulli: return make_bernoulli();
    case BuiltinKind::normal: return make_normal();
    case BuiltinKind::student_t: return make_student_t(parameter);
    case BuiltinKind::beta: return make_symmetric_beta(parameter);
    }
    throw ContractError("unknown builtin kind");
}

ConcordanceInducing make_discrete(const DiscreteSymmetricSpec& spec) {
    spec.validate();
    const std::size_t m = spec.m();

    laws::Discrete law;
    std::vector<double> probs;
    for (std::size_t i = m; i >= 1; --i) {
        law.atoms.push_back(-spec.z[i - 1]);
        probs.push_back(spec.p[i]);
    }
    law.atoms.push_back(0.0);
    probs.push_back(spec.p[0]);
    for (std::size_t i = 1; i <= m; ++i) {
        law.atoms.push_back(spec.z[i - 1]);
        probs.push_back(spec.p[i]);
    }
    double running = 0.0;
    for (const double q : probs) {
        running += q;
        law.cumulative.push_back(running);
    }

    double fourth = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        fourth += 2.0 * spec.p[i + 1] * std::pow(spec.z[i], 4);
    }

    std::string name = "discrete:" + std::to_string(m) + ":";
    for (std::size_t i = 0; i < m; ++i) {
        name += (i ? "," : "") + format_number(spec.z[i]);
    }
    name += ":";
    for (std::size_t i = 0; i <= m; ++i) {
        name += (i ? "," : "") + format_number(spec.p[i]);
    }

    ConcordanceInducing g(std::move(name), std::move(law), SupportKind::discrete, fourth);

    // I_{-i}, I_0, I_i as closed intervals, ordered by index -m..m.
    double p_plus = 0.0;
    for (std::size_t i = 1; i <= m; ++i) {
        p_plus += spec.p[i];
    }
    std::vector<QuantileInterval> below;
    double acc = 0.0;
    for (std::size_t i = 1; i <= m; ++i) {
        const double hi = p_plus - acc;
        acc += spec.p[i];
        below.push_back({-static_cast<int>(i), p_plus - acc, hi, -spec.z[i - 1]});
    }
    std::reverse(below.begin(), below.end());
    g.partition_ = std::move(below);
    g.partition_.push_back({0, p_plus, p_plus + spec.p[0], 0.0});
    acc = 0.0;
    for (std::size_t i = 1; i <= m; ++i) {
        const double lo = p_plus + spec.p[0] + acc;
        acc += spec.p[i];
        g.partition_.push_back({static_cast<int>(i), lo, p_plus + spec.p[0] + acc, spec.z[i - 1]});
    }
    return g;
}

ConcordanceInducing make_mixture_point_uniform() {
    // E[X^4] = 1/2 * 6^2 / 5
    return {"mix0u6", laws::PointUniformMixture{}, SupportKind::bounded, 3.6};
}

ConcordanceInducing shifted(const ConcordanceInducing& g, double mu) {
    if (g.is_shifted()) {
        throw ContractError("law " + g.name() + " is already shifted");
    }
    ConcordanceInducing out = g;
    out.shift_ = mu;
    out.shifted_ = true;
    out.name_ = g.name() + "+shift:" + format_number(mu);
    return out;
}

DiscreteSymmetricSpec blomqvist_spec() {
    return {{1.0}, {0.0, 0.5}};
}

DiscreteSymmetricSpec four_point_spec() {
    const double a = 1.0 / std::sqrt(2.0);
    const double b = std::sqrt(1.0 - std::sqrt(2.0) / 2.0);
    return {{b, a / b}, {0.0, 0.25, 0.25}};
}

} // namespace concord
