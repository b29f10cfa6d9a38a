#include "concord/special_functions.hpp"

#include <boost/math/distributions/students_t.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace concord::special;

namespace {

// Plackett's identity: d Phi2 / d rho equals the bivariate density, so
// Phi2(x, y; rho) = Phi(x) Phi(y) + int_0^rho phi2(x, y; r) dr.
double plackett_oracle(double x, double y, double rho) {
    const auto density = [&](double r) {
        const double s = 1.0 - r * r;
        return std::exp(-(x * x - 2.0 * r * x * y + y * y) / (2.0 * s)) /
               (2.0 * std::numbers::pi * std::sqrt(s));
    };
    const double integral =
        boost::math::quadrature::gauss_kronrod<double, 61>::integrate(density, 0.0, rho, 15, 1e-14);
    return normal_cdf(x) * normal_cdf(y) + integral;
}

} // namespace

TEST_CASE("normal quantile matches high-precision references") {
    // reference values computed with 40-digit arithmetic
    CHECK(normal_quantile(0.025) == doctest::Approx(-1.9599639845400542355).epsilon(1e-15));
    CHECK(normal_quantile(0.975) == doctest::Approx(1.9599639845400542355).epsilon(1e-15));
    CHECK(normal_quantile(0.3) == doctest::Approx(-0.52440051270804078404).epsilon(1e-15));
    CHECK(normal_quantile(0.001) == doctest::Approx(-3.0902323061678135415).epsilon(1e-15));
    CHECK(normal_quantile(1e-20) == doctest::Approx(-9.2623400897984075737).epsilon(1e-14));
    CHECK(normal_quantile(1e-300) == doctest::Approx(-37.047096299361199237).epsilon(1e-13));
    // 1 - 0.999999 is only known to ~1e-10 relative in double precision
    CHECK(normal_quantile(0.999999) == doctest::Approx(4.7534243088228989482).epsilon(1e-10));
    CHECK(normal_quantile(0.5) == 0.0);
    CHECK(std::isinf(normal_quantile(0.0)));
    CHECK(std::isinf(normal_quantile(1.0)));
}

TEST_CASE("normal quantile inverts the CDF and is odd") {
    for (double p = 1e-6; p < 1.0; p += 0.0137) {
        CHECK(normal_cdf(normal_quantile(p)) == doctest::Approx(p).epsilon(1e-14));
        // 1 - p rounds, and the tail quantile amplifies that by 1 / phi(q)
        CHECK(normal_quantile(1.0 - p) == doctest::Approx(-normal_quantile(p)).epsilon(1e-9));
    }
}

TEST_CASE("student t CDF matches quadrature references") {
    CHECK(student_t_cdf(1.5, 5) == doctest::Approx(0.90304815987876328393).epsilon(1e-14));
    CHECK(student_t_cdf(-2.0, 10) == doctest::Approx(0.036694017385370182809).epsilon(1e-14));
    CHECK(student_t_cdf(0.3, 4.5) == doctest::Approx(0.61123322648028434731).epsilon(1e-13));
    CHECK(student_t_cdf(-30, 5) == doctest::Approx(3.859324310248025993e-7).epsilon(1e-12));
    CHECK(student_t_cdf(3.0, 200) == doctest::Approx(0.9984784764430470486).epsilon(1e-13));
}

TEST_CASE("student t CDF and quantile agree with an independent library") {
    for (double nu : {4.5, 5.0, 10.0, 30.0}) {
        const boost::math::students_t_distribution<double> dist(nu);
        for (double x = -8.0; x <= 8.0; x += 0.37) {
            CHECK(student_t_cdf(x, nu) == doctest::Approx(boost::math::cdf(dist, x)).epsilon(1e-12));
        }
        for (double p : {1e-9, 1e-4, 0.01, 0.2, 0.5, 0.77, 0.999, 1.0 - 1e-9}) {
            CHECK(student_t_quantile(p, nu) ==
                  doctest::Approx(boost::math::quantile(dist, p)).epsilon(1e-9));
        }
    }
}

TEST_CASE("bivariate normal CDF agrees with the Plackett integral") {
    for (double rho : {-0.95, -0.5, -0.1, 0.3, 0.7, 0.99}) {
        for (double x : {-2.5, -0.4, 0.0, 1.1}) {
            for (double y : {-1.3, 0.2, 2.0}) {
                CHECK(bivariate_normal_cdf(x, y, rho) ==
                      doctest::Approx(plackett_oracle(x, y, rho)).epsilon(1e-7));
            }
        }
    }
}

TEST_CASE("bivariate normal CDF special cases") {
    // Sheppard's formula at the origin
    for (double rho : {-0.9, -0.3, 0.0, 0.4, 0.8}) {
        CHECK(bivariate_normal_cdf(0.0, 0.0, rho) ==
              doctest::Approx(0.25 + std::asin(rho) / (2.0 * std::numbers::pi)).epsilon(1e-12));
    }
    CHECK(bivariate_normal_cdf(0.7, -0.2, 0.0) ==
          doctest::Approx(normal_cdf(0.7) * normal_cdf(-0.2)).epsilon(1e-14));
    CHECK(bivariate_normal_cdf(0.7, -0.2, 1.0) == doctest::Approx(normal_cdf(-0.2)).epsilon(1e-14));
    CHECK(bivariate_normal_cdf(0.7, 0.2, -1.0) ==
          doctest::Approx(normal_cdf(0.7) + normal_cdf(0.2) - 1.0).epsilon(1e-14));
    CHECK(bivariate_normal_cdf(-0.7, 0.2, -1.0) == 0.0);
    const double inf = INFINITY;
    CHECK(bivariate_normal_cdf(inf, 0.3, 0.5) == doctest::Approx(normal_cdf(0.3)));
    CHECK(bivariate_normal_cdf(-inf, 0.3, 0.5) == 0.0);
}

TEST_CASE("incomplete beta round trip") {
    for (double a : {0.5, 2.0, 7.5}) {
        for (double p : {0.01, 0.4, 0.93}) {
            CHECK(incomplete_beta(a, a, incomplete_beta_inverse(a, a, p)) == doctest::Approx(p).epsilon(1e-12));
        }
    }
}

TEST_CASE("solve_monotone falls back to bisection on a flat derivative") {
    const auto f = [](double x) { return std::cbrt(x); };
    const auto df = [](double) { return 0.0; };
    CHECK(solve_monotone(f, df, 0.5, -1.0, 1.0, 0.9) == doctest::Approx(0.125).epsilon(1e-9));
}
