#pragma once

#include <functional>

namespace concord::special {

/// Standard normal distribution function.
double normal_cdf(double x);

/// Standard normal density.
double normal_pdf(double x);

/// Inverse of the standard normal distribution function (Wichura's AS 241,
/// about 1e-16 relative accuracy). Returns -inf/+inf at p = 0/1.
double normal_quantile(double p);

/// Student t distribution function with `nu` degrees of freedom. Integer
/// degrees of freedom use the finite trigonometric series; everything else
/// goes through the regularized incomplete beta function.
double student_t_cdf(double x, double nu);

double student_t_pdf(double x, double nu);

/// Inverse Student t distribution function. Newton iterations on the CDF,
/// safeguarded by bisection; converges to 1e-12 in probability.
double student_t_quantile(double p, double nu);

/// Regularized incomplete beta I_x(a, b) and its inverse in x.
double incomplete_beta(double a, double b, double x);
double incomplete_beta_inverse(double a, double b, double p);

/// Bivariate standard normal distribution function P(X <= x, Y <= y) with
/// correlation rho. Drezner-Wesolowsky/Genz hybrid with 20-point
/// Gauss-Legendre quadrature.
double bivariate_normal_cdf(double x, double y, double rho);

/// Finds x in [lo, hi] with f(x) = target for non-decreasing f using Newton
/// steps with derivative `df`, falling back to bisection whenever a step
/// leaves the current bracket.
double solve_monotone(const std::function<double(double)>& f,
                      const std::function<double(double)>& df,
                      double target, double lo, double hi, double x0,
                      double f_tolerance = 1e-12);

} // namespace concord::special
