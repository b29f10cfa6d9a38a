#include "concord/special_functions.hpp"

#include "concord/errors.hpp"

#include <boost/math/special_functions/beta.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

namespace concord::special {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// 20-point Gauss-Legendre rule on [-1, 1], built once by Newton iteration on
// the Legendre recurrence.
struct GaussLegendre20 {
    std::array<double, 20> nodes{};
    std::array<double, 20> weights{};

    GaussLegendre20() {
        constexpr int n = 20;
        for (int i = 0; i < n; ++i) {
            double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
            double dp = 0.0;
            for (int iter = 0; iter < 100; ++iter) {
                double p0 = 1.0;
                double p1 = x;
                for (int k = 2; k <= n; ++k) {
                    const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                    p0 = p1;
                    p1 = pk;
                }
                dp = n * (x * p1 - p0) / (x * x - 1.0);
                const double dx = p1 / dp;
                x -= dx;
                if (std::abs(dx) < 1e-16) {
                    break;
                }
            }
            nodes[i] = x;
            weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
        }
    }

    template <class F>
    double integrate(F&& f) const {
        double sum = 0.0;
        for (int i = 0; i < 20; ++i) {
            sum += weights[i] * f(nodes[i]);
        }
        return sum;
    }
};

const GaussLegendre20& gauss_legendre() {
    static const GaussLegendre20 rule;
    return rule;
}

// P(|T| <= |x|) * sign(x) for integer degrees of freedom (Abramowitz & Stegun 26.7.3/4).
double student_t_a_series(double x, int nu) {
    const double theta = std::atan(x / std::sqrt(static_cast<double>(nu)));
    const double s = std::sin(theta);
    const double c = std::cos(theta);
    const double c2 = c * c;
    if (nu % 2 == 0) {
        double term = 1.0;
        double sum = 1.0;
        for (int j = 1; j <= (nu - 2) / 2; ++j) {
            term *= c2 * (2.0 * j - 1.0) / (2.0 * j);
            sum += term;
        }
        return s * sum;
    }
    if (nu == 1) {
        return 2.0 * theta / std::numbers::pi;
    }
    double term = 1.0;
    double sum = 1.0;
    for (int j = 1; j <= (nu - 3) / 2; ++j) {
        term *= c2 * (2.0 * j) / (2.0 * j + 1.0);
        sum += term;
    }
    return 2.0 / std::numbers::pi * (theta + s * c * sum);
}

double student_t_lower_tail_beta(double x, double nu) {
    // x <= 0
    const double z = nu / (nu + x * x);
    return 0.5 * boost::math::ibeta(0.5 * nu, 0.5, z);
}

bool is_small_integer(double nu) {
    return nu == std::floor(nu) && nu >= 1.0 && nu <= 200.0;
}

} // namespace

double normal_cdf(double x) {
    return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

double normal_pdf(double x) {
    return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
}

double normal_quantile(double p) {
    if (std::isnan(p) || p < 0.0 || p > 1.0) {
        throw ContractError("normal_quantile: probability outside [0,1]");
    }
    if (p == 0.0) {
        return -kInf;
    }
    if (p == 1.0) {
        return kInf;
    }
    // Wichura (1988), AS 241 PPND16.
    const double q = p - 0.5;
    if (std::abs(q) <= 0.425) {
        const double r = 0.180625 - q * q;
        return q *
               (((((((2.5090809287301226727e3 * r + 3.3430575583588128105e4) * r +
                     6.7265770927008700853e4) * r + 4.5921953931549871457e4) * r +
                   1.3731693765509461125e4) * r + 1.9715909503065514427e3) * r +
                 1.3314166789178437745e2) * r + 3.3871328727963666080e0) /
               (((((((5.2264952788528545610e3 * r + 2.8729085735721942674e4) * r +
                     3.9307895800092710610e4) * r + 2.1213794301586595867e4) * r +
                   5.3941960214247511077e3) * r + 6.8718700749205790830e2) * r +
                 4.2313330701600911252e1) * r + 1.0);
    }
    double r = q < 0.0 ? p : 1.0 - p;
    r = std::sqrt(-std::log(r));
    double value;
    if (r <= 5.0) {
        r -= 1.6;
        value = (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r +
                      2.41780725177450611770e-1) * r + 1.27045825245236838258e0) * r +
                    3.64784832476320460504e0) * r + 5.76949722146069140550e0) * r +
                  4.63033784615654529590e0) * r + 1.42343711074968357734e0) /
                (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r +
                      1.51986665636164571966e-2) * r + 1.48103976427480074590e-1) * r +
                    6.89767334985100004550e-1) * r + 1.67638483018380384940e0) * r +
                  2.05319162663775882187e0) * r + 1.0);
    } else {
        r -= 5.0;
        value = (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
                      1.24266094738807843860e-3) * r + 2.65321895265761230930e-2) * r +
                    2.96560571828504891230e-1) * r + 1.78482653991729133580e0) * r +
                  5.46378491116411436990e0) * r + 6.65790464350110377720e0) /
                (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) * r +
                      1.84631831751005468180e-5) * r + 7.86869131145613259100e-4) * r +
                    1.48753612908506148525e-2) * r + 1.36929880922735805310e-1) * r +
                  5.99832206555887937690e-1) * r + 1.0);
    }
    return q < 0.0 ? -value : value;
}

double student_t_cdf(double x, double nu) {
    if (!(nu > 0.0)) {
        throw ContractError("student_t_cdf: degrees of freedom must be positive");
    }
    if (std::isinf(x)) {
        return x > 0 ? 1.0 : 0.0;
    }
    if (!is_small_integer(nu)) {
        const double lower = student_t_lower_tail_beta(-std::abs(x), nu);
        return x <= 0.0 ? lower : 1.0 - lower;
    }
    const double a = student_t_a_series(x, static_cast<int>(nu));
    const double lower = 0.5 * (1.0 - std::abs(a));
    if (lower < 1e-4) {
        // the series cancels in the far tail
        const double tail = student_t_lower_tail_beta(-std::abs(x), nu);
        return x <= 0.0 ? tail : 1.0 - tail;
    }
    return 0.5 * (1.0 + a);
}

double student_t_pdf(double x, double nu) {
    const double log_c = std::lgamma(0.5 * (nu + 1.0)) - std::lgamma(0.5 * nu) -
                         0.5 * std::log(nu * std::numbers::pi);
    return std::exp(log_c - 0.5 * (nu + 1.0) * std::log1p(x * x / nu));
}

double student_t_quantile(double p, double nu) {
    if (!(p > 0.0 && p < 1.0)) {
        if (p == 0.0) return -kInf;
        if (p == 1.0) return kInf;
        throw ContractError("student_t_quantile: probability outside [0,1]");
    }
    if (p == 0.5) {
        return 0.0;
    }
    // Solve in the lower half and reflect.
    const bool upper = p > 0.5;
    const double target = upper ? 1.0 - p : p;

    const double z = normal_quantile(target);
    double x0 = z + (z * z * z + z) / (4.0 * nu);
    double lo = std::min(2.0 * x0, -1.0);
    while (student_t_cdf(lo, nu) > target) {
        lo *= 2.0;
        if (lo < -1e300) {
            break;
        }
    }
    x0 = std::clamp(x0, lo, 0.0);

    const double log_c = std::lgamma(0.5 * (nu + 1.0)) - std::lgamma(0.5 * nu) -
                         0.5 * std::log(nu * std::numbers::pi);
    const auto pdf = [&](double x) {
        return std::exp(log_c - 0.5 * (nu + 1.0) * std::log1p(x * x / nu));
    };
    const auto cdf = [nu](double x) { return student_t_cdf(x, nu); };
    const double x = solve_monotone(cdf, pdf, target, lo, 0.0, x0,
                                    std::min(1e-12, 1e-8 * target));
    return upper ? -x : x;
}

double incomplete_beta(double a, double b, double x) {
    return boost::math::ibeta(a, b, x);
}

double incomplete_beta_inverse(double a, double b, double p) {
    return boost::math::ibeta_inv(a, b, p);
}

double solve_monotone(const std::function<double(double)>& f,
                      const std::function<double(double)>& df,
                      double target, double lo, double hi, double x0,
                      double f_tolerance) {
    double x = std::clamp(x0, lo, hi);
    for (int iter = 0; iter < 200; ++iter) {
        const double fx = f(x) - target;
        if (std::abs(fx) <= f_tolerance) {
            return x;
        }
        if (fx < 0.0) {
            lo = x;
        } else {
            hi = x;
        }
        const double slope = df(x);
        double next = slope > 0.0 ? x - fx / slope : lo - 1.0;
        if (!(next > lo && next < hi)) {
            next = 0.5 * (lo + hi);
        }
        if (std::abs(next - x) <= 1e-15 * (1.0 + std::abs(x))) {
            return next;
        }
        x = next;
    }
    return x;
}

double bivariate_normal_cdf(double x, double y, double rho) {
    if (rho < -1.0 || rho > 1.0 || std::isnan(rho)) {
        throw ContractError("bivariate_normal_cdf: correlation outside [-1,1]");
    }
    if (x == -kInf || y == -kInf) return 0.0;
    if (x == kInf) return normal_cdf(y);
    if (y == kInf) return normal_cdf(x);
    if (rho == 1.0) return normal_cdf(std::min(x, y));
    if (rho == -1.0) return std::max(0.0, normal_cdf(x) - normal_cdf(-y));

    const auto& gl = gauss_legendre();
    const double h = -x;
    double k = -y;
    double hk = h * k;
    double bvn = 0.0;

    if (std::abs(rho) < 0.925) {
        if (rho != 0.0) {
            const double asr = std::asin(rho);
            const double hs = 0.5 * (h * h + k * k);
            bvn = gl.integrate([&](double t) {
                const double sn = std::sin(asr * (1.0 - t) * 0.5);
                return std::exp((sn * hk - hs) / (1.0 - sn * sn));
            });
            bvn *= asr * (0.25 / std::numbers::pi);
        }
        return bvn + normal_cdf(-h) * normal_cdf(-k);
    }

    if (rho < 0.0) {
        k = -k;
        hk = -hk;
    }
    const double ass = (1.0 - rho) * (1.0 + rho);
    double a = std::sqrt(ass);
    const double bs = (h - k) * (h - k);
    const double c = (4.0 - hk) / 8.0;
    const double d = (12.0 - hk) / 16.0;
    const double asr0 = -(bs / ass + hk) / 2.0;
    if (asr0 > -100.0) {
        bvn = a * std::exp(asr0) *
              (1.0 - c * (bs - ass) * (1.0 - d * bs / 5.0) / 3.0 + c * d * ass * ass / 5.0);
    }
    if (-hk < 100.0) {
        const double b = std::sqrt(bs);
        bvn -= std::exp(-hk / 2.0) * std::sqrt(2.0 * std::numbers::pi) * normal_cdf(-b / a) * b *
               (1.0 - c * bs * (1.0 - d * bs / 5.0) / 3.0);
    }
    a /= 2.0;
    bvn += gl.integrate([&](double t) {
        double xs = a * (1.0 - t);
        xs = xs * xs;
        const double rs = std::sqrt(1.0 - xs);
        const double asr = -(bs / xs + hk) / 2.0;
        if (asr <= -100.0) {
            return 0.0;
        }
        return a * std::exp(asr) *
               (std::exp(-hk * (1.0 - rs) / (2.0 * (1.0 + rs))) / rs - (1.0 + c * xs * (1.0 + d * xs)));
    });
    bvn /= -2.0 * std::numbers::pi;

    if (rho > 0.0) {
        bvn += normal_cdf(-std::max(h, k));
    } else {
        bvn = -bvn;
        if (k > h) {
            if (h >= 0.0) {
                bvn += normal_cdf(-h) - normal_cdf(-k);
            } else {
                bvn += normal_cdf(k) - normal_cdf(h);
            }
        }
    }
    return std::clamp(bvn, 0.0, 1.0);
}

} // namespace concord::special
