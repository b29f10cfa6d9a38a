#include "concord/analytics.hpp"
#include "concord/errors.hpp"
#include "concord/special_functions.hpp"

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace concord;
using namespace concord::analytics;

namespace {

std::vector<FrechetWeights> simplex(int steps) {
    std::vector<FrechetWeights> out;
    for (int i = 0; i <= steps; ++i) {
        for (int j = 0; i + j <= steps; ++j) {
            out.push_back({double(i) / steps, double(j) / steps, double(steps - i - j) / steps});
        }
    }
    return out;
}

double fourth_moment_by_quadrature(const ConcordanceInducing& g) {
    boost::math::quadrature::tanh_sinh<double> q;
    return q.integrate([&](double p) { return std::pow(g.quantile(p), 4); }, 0.0, 1.0);
}

// E[X^2 Y^2] for a standard bivariate normal by Gauss-Hermite product rule
double normal_product_second_moment(double rho) {
    // 40-point physicists' Gauss-Hermite nodes from the Golub-Welsch recurrence
    constexpr int n = 40;
    std::vector<double> x(n);
    std::vector<double> w(n);
    for (int i = 0; i < n; ++i) {
        double z = i == 0 ? std::sqrt(2.0 * n + 1) - 1.85575 * std::pow(2.0 * n + 1, -1.0 / 6.0)
                 : i == 1 ? x[0] - 1.14 * std::pow(double(n), 0.426) / x[0]
                 : i == 2 ? 1.86 * x[1] - 0.86 * x[0]
                 : i == 3 ? 1.91 * x[2] - 0.91 * x[1]
                          : 2.0 * x[i - 1] - x[i - 2];
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p1 = std::pow(std::numbers::pi, -0.25);
            double p2 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p3 = p2;
                p2 = p1;
                p1 = z * std::sqrt(2.0 / (j + 1)) * p2 - std::sqrt(double(j) / (j + 1)) * p3;
            }
            pp = std::sqrt(2.0 * n) * p2;
            const double dz = p1 / pp;
            z -= dz;
            if (std::abs(dz) < 1e-15) break;
        }
        x[i] = z;
        w[i] = 2.0 / (pp * pp);
    }
    // X = sqrt2 s, Y = rho X + sqrt(1 - rho^2) sqrt2 t
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const double xx = std::sqrt(2.0) * x[i];
            const double yy = rho * xx + std::sqrt(1.0 - rho * rho) * std::sqrt(2.0) * x[j];
            total += w[i] * w[j] * xx * xx * yy * yy;
        }
    }
    return total / std::numbers::pi;
}

} // namespace

TEST_CASE("Frechet variance matches moments computed by quadrature") {
    for (const auto& g : {make_uniform(), make_normal(), make_student_t(10.0), make_symmetric_beta(0.5)}) {
        const double m4 = fourth_moment_by_quadrature(g);
        for (const auto& w : simplex(4)) {
            const double second = (w.p_m + w.p_w) * m4 + w.p_pi; // E[(XY)^2]
            const double kappa = w.p_m - w.p_w;
            CHECK(sigma2_frechet(g, w) == doctest::Approx(second - kappa * kappa).epsilon(1e-7));
        }
    }
}

TEST_CASE("Frechet variance matches the discrete interval sums") {
    const std::vector<DiscreteSymmetricSpec> specs = {blomqvist_spec(), four_point_spec()};
    for (const auto& spec : specs) {
        const auto g = make_discrete(spec);
        for (const auto& w : simplex(5)) {
            CHECK(sigma2_discrete(spec, frechet(w)) == doctest::Approx(sigma2_frechet(g, w)).epsilon(1e-12));
            CHECK(kappa_discrete(spec, frechet(w)) == doctest::Approx(kappa_frechet(w)).epsilon(1e-12));
        }
    }
}

TEST_CASE("fundamental values") {
    const auto g = make_student_t(10.0);
    CHECK(sigma2_frechet(g, {0, 1, 0}) == doctest::Approx(1.0));
    CHECK(sigma2_frechet(g, {1, 0, 0}) == doctest::Approx(3.0));
    CHECK(sigma2_frechet(g, {0, 0, 1}) == doctest::Approx(3.0));
    CHECK(sigma2_frechet(g, {0.5, 0, 0.5}) == doctest::Approx(4.0));
    CHECK(sigma2_from_covariances(2.0, 0.5) == doctest::Approx(2.75));
    CHECK(tau_frechet({1, 0, 0}) == doctest::Approx(1.0));
    CHECK(tau_frechet({0, 0, 1}) == doctest::Approx(-1.0));
    CHECK(tau_frechet({0.5, 0.5, 0}) == doctest::Approx(0.5 * 2.5 / 3.0));
}

TEST_CASE("variance envelope equals a brute-force scan of the simplex") {
    for (const auto& g : {make_uniform(), make_normal(), make_bernoulli(), make_symmetric_beta(0.5),
                          make_mixture_point_uniform()}) {
        double lo = INFINITY;
        double hi = -INFINITY;
        for (const auto& w : simplex(60)) {
            lo = std::min(lo, sigma2_frechet(g, w));
            hi = std::max(hi, sigma2_frechet(g, w));
        }
        const auto env = envelope_frechet(g);
        CHECK(env.best == doctest::Approx(lo).epsilon(1e-12));
        CHECK(env.worst == doctest::Approx(hi).epsilon(1e-12));
    }
    using A = Attainer;
    CHECK(envelope_frechet(make_uniform()).best_attainers == std::vector<A>{A::comonotone, A::countermonotone});
    CHECK(envelope_frechet(make_normal()).best_attainers == std::vector<A>{A::independence});
    const auto mid = make_discrete(blomqvist_spec());
    CHECK(envelope_frechet(mid).worst_attainers == std::vector<A>{A::mid_mw_pi_segment});
    CHECK(envelope_frechet(make_normal()).worst_attainers == std::vector<A>{A::mid_mw});
}

TEST_CASE("variance ties at V = 1 make M, Pi and W all optimal") {
    // two atoms with Var(X^2) = 1: mass 1/2 at zero and 1/4 at +-sqrt 2
    const auto g = make_discrete({{std::sqrt(2.0)}, {0.5, 0.25}});
    CHECK(g.var_x_squared() == doctest::Approx(1.0));
    const auto env = envelope_frechet(g);
    CHECK(env.best_attainers.size() == 3);
    CHECK(env.best == doctest::Approx(1.0));
}

TEST_CASE("preference criterion") {
    CHECK(prefer(make_uniform(), make_normal()) == Preference::first);
    CHECK(prefer(make_student_t(10.0), make_normal()) == Preference::second);
    CHECK(prefer(make_symmetric_beta(1.0), make_uniform()) == Preference::equivalent);
    CHECK_THROWS_AS(prefer(shifted(make_normal(), 0.1), make_uniform()), ContractError);
}

TEST_CASE("Blomqvist and Kendall closed forms") {
    CHECK(beta(gaussian(0.5)) == doctest::Approx(1.0 / 3.0));
    CHECK(sigma2_beta(gaussian(0.5)) == doctest::Approx(8.0 / 9.0));
    for (double theta : {-0.7, 0.5, 2.0, 9.0}) {
        // dual route through the Clayton CDF at the center
        CHECK(beta_clayton(theta) == doctest::Approx(4.0 * clayton(theta).cdf(0.5, 0.5) - 1.0).epsilon(1e-12));
        CHECK(beta(clayton(theta)) == doctest::Approx(beta_clayton(theta)));
        CHECK(tau_closed_form(clayton(theta)) == doctest::Approx(theta / (theta + 2.0)));
    }
    CHECK(beta_clayton(0.0) == 0.0);
    CHECK(beta_clayton(-1.0) == doctest::Approx(-1.0));
    CHECK(tau_closed_form(student_t_copula(0.5, 5.0)) == doctest::Approx(1.0 / 3.0));
    CHECK(tau_closed_form(reflect(clayton(2.0), Reflection::nu1)) == doctest::Approx(-0.5));
    CHECK(tau_closed_form(reflect(clayton(2.0), Reflection::nu1nu2)) == doctest::Approx(0.5));
    CHECK_THROWS_AS(tau_closed_form(shuffle_of_m(ShuffleSpec::equal_strips({2, 1}, {1, 1}))), CapabilityError);
    CHECK(sigma2_tau_analytic(0.5) == doctest::Approx(0.75));
    CHECK_THROWS_AS(sigma2_tau_analytic(1.5), ContractError);
}

TEST_CASE("reflection invariance of the Blomqvist and Frechet variances") {
    for (const auto& c : {clayton(2.0), gaussian(-0.4), frechet({0.1, 0.3, 0.6}), student_t_copula(0.7, 4.0)}) {
        for (auto phi : {Reflection::nu1, Reflection::nu2, Reflection::nu1nu2}) {
            CHECK(sigma2_beta(reflect(c, phi)) == doctest::Approx(sigma2_beta(c)).epsilon(1e-12));
        }
    }
    // nu1 maps the Frechet point (pM, pPi, pW) to (pW, pPi, pM)
    const auto g = make_normal();
    for (const auto& w : simplex(5)) {
        CHECK(sigma2_frechet(g, {w.p_w, w.p_pi, w.p_m}) == doctest::Approx(sigma2_frechet(g, w)));
        CHECK(sigma2_discrete(blomqvist_spec(), reflect(frechet(w), Reflection::nu1)) ==
              doctest::Approx(sigma2_discrete(blomqvist_spec(), frechet(w))).epsilon(1e-12));
    }
}

TEST_CASE("normal variance mixtures") {
    for (double rho : {-0.9, -0.3, 0.0, 0.6, 0.95}) {
        const double oracle = normal_product_second_moment(rho) - rho * rho;
        CHECK(sigma2_nvm({1.0, 1.0}, rho) == doctest::Approx(oracle).epsilon(1e-10));
        const auto t = student_t_mixture_moments(7.0);
        CHECK(sigma2_nvm(t, rho) == doctest::Approx(sigma2_nvm_via_var_x2(t, rho)));
    }
    // Var(X^2) = 3 r - 1 agrees with the t law's own fourth moment
    for (double nu : {5.0, 6.5, 10.0, 40.0}) {
        CHECK(nvm_var_x_squared(student_t_mixture_moments(nu)) ==
              doctest::Approx(make_student_t(nu).var_x_squared()));
    }
    CHECK(sigma2_nvm(student_t_mixture_moments(5.0), 0.5) == doctest::Approx(5.0 * 0.25 + 3.0));
    CHECK_THROWS_AS(student_t_mixture_moments(4.0), ContractError);
    CHECK_THROWS_AS(sigma2_nvm({1.0, 0.5}, 0.1), ContractError);
}

TEST_CASE("optimal shift minimizes the shifted variance") {
    const double var_p = 2.3;
    const double cov = -0.4;
    const double var_s = 1.7;
    double best = INFINITY;
    double arg = 0.0;
    for (int i = -4000; i <= 4000; ++i) {
        const double mu = i * 1e-4;
        const double v = var_p + 2.0 * mu * cov + mu * mu * var_s;
        if (v < best) {
            best = v;
            arg = mu;
        }
    }
    CHECK(optimal_shift_analytic(cov, var_s) == doctest::Approx(arg).epsilon(1e-3));
    CHECK(optimal_shifted_variance(var_p, cov, var_s) == doctest::Approx(best).epsilon(1e-7));
    CHECK(optimal_shift_analytic(0.3, 0.0) == 0.0);
}

TEST_CASE("discrete sums reproduce the zero-variance examples") {
    const auto spec = four_point_spec();
    const auto c4 = shuffle_of_m(ShuffleSpec::equal_strips({2, 1, 4, 3}, {-1, -1, -1, -1}));
    CHECK(kappa_discrete(spec, c4) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
    CHECK(std::abs(sigma2_discrete(spec, c4)) < 1e-12);
    // flips do not matter when quantiles are constant on the strips
    const auto flipped = shuffle_of_m(ShuffleSpec::equal_strips({2, 1, 4, 3}, {1, 1, 1, 1}));
    CHECK(kappa_discrete(spec, flipped) == doctest::Approx(kappa_discrete(spec, c4)));
}

TEST_CASE("squared copula of a Gaussian copula with normal G") {
    const auto g = make_normal();
    for (double rho : {-0.8, 0.3, 0.9}) {
        const auto c = gaussian(rho);
        for (double u : {0.1, 0.5, 0.85}) {
            for (double v : {0.2, 0.6, 0.95}) {
                // P(|X| <= a, |Y| <= b) for the underlying bivariate normal
                const double a = special::normal_quantile(0.5 * (1.0 + u));
                const double b = special::normal_quantile(0.5 * (1.0 + v));
                const auto F = [&](double x, double y) { return special::bivariate_normal_cdf(x, y, rho); };
                const double oracle = F(a, b) - F(-a, b) - F(a, -b) + F(-a, -b);
                CHECK(squared_copula(c, g.is_continuous(), u, v) == doctest::Approx(oracle).epsilon(1e-7));
            }
        }
    }
    CHECK_THROWS_AS(squared_copula(independence(), false, 0.5, 0.5), ContractError);
    CHECK_THROWS_AS(squared_copula(independence(), true, 1.5, 0.5), ContractError);
}

TEST_CASE("closed-form dispatch") {
    CHECK(sigma2_closed_form(make_normal(), gaussian(0.5)).value() == doctest::Approx(1.25));
    CHECK(sigma2_closed_form(make_student_t(5.0), student_t_copula(0.5, 5.0)).value() == doctest::Approx(4.25));
    CHECK(sigma2_closed_form(make_bernoulli(), clayton(2.0)).value() ==
          doctest::Approx(1.0 - beta_clayton(2.0) * beta_clayton(2.0)));
    CHECK(sigma2_closed_form(make_uniform(), independence()).value() == doctest::Approx(1.0));
    CHECK(sigma2_closed_form(make_uniform(), clayton(-1.0)).value() == doctest::Approx(0.8));
    CHECK_FALSE(sigma2_closed_form(make_normal(), clayton(2.0)).has_value());
    CHECK_FALSE(sigma2_closed_form(shifted(make_normal(), 0.2), independence()).has_value());
}
