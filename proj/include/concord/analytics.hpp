#pragma once

#include "concord/copulas.hpp"
#include "concord/distributions.hpp"

#include <optional>
#include <vector>

namespace concord::analytics {

/// Symbolic copula descriptors for the attainers of a variance envelope.
enum class Attainer {
    comonotone,     ///< M
    countermonotone, ///< W
    independence,   ///< Pi
    mid_mw,         ///< (M + W) / 2
    mid_mw_pi_segment ///< p (M + W) / 2 + (1 - p) Pi, p in [0, 1]
};

struct VarianceEnvelope {
    double best = 0.0;
    double worst = 0.0;
    std::vector<Attainer> best_attainers;
    std::vector<Attainer> worst_attainers;
};

/// E[W] and E[W^2] of the mixing variable of a normal variance mixture.
struct MixtureMoments {
    double e_w = 1.0;
    double e_w2 = 1.0;

    void validate() const;
    double ratio() const { return e_w2 / (e_w * e_w); }
};

/// sigma^2 = Cov(X^2, Y^2) + 1 - Cov(X, Y)^2.
double sigma2_from_covariances(double cov_x2y2, double cov_xy);

/// Asymptotic variance of kappa_G under a Frechet copula:
/// (p_M + p_W) Var_G(X^2) + 1 - (p_M - p_W)^2.
double sigma2_frechet(const ConcordanceInducing& g, const FrechetWeights& w);

double kappa_frechet(const FrechetWeights& w);
double tau_frechet(const FrechetWeights& w);

VarianceEnvelope envelope_frechet(const ConcordanceInducing& g);

enum class Preference { first, second, equivalent };

/// Smaller Var_G(X^2) is preferred; ties within 1e-12 are equivalent.
Preference prefer(const ConcordanceInducing& g, const ConcordanceInducing& g_prime);

/// Blomqvist's beta 4 C(1/2,1/2) - 1 and its asymptotic variance 4 p (1 - p).
double beta(const Copula& c);
double sigma2_beta(const Copula& c);

/// Kendall's tau where a closed form exists (elliptical, Clayton, Frechet and
/// fundamental copulas, plus reflections of these). Throws CapabilityError otherwise.
double tau_closed_form(const Copula& c);
double sigma2_tau_analytic(double tau);

/// 4 (2^(theta+1) - 1)^(-1/theta) - 1, with the independence limit at theta = 0.
double beta_clayton(double theta);

/// (2 r - 1) rho^2 + r with r = E[W^2] / E[W]^2.
double sigma2_nvm(const MixtureMoments& m, double rho);
/// Same quantity written through Var(X^2) = 3 r - 1: (Var(X^2) - r) rho^2 + r.
double sigma2_nvm_via_var_x2(const MixtureMoments& m, double rho);
double nvm_var_x_squared(const MixtureMoments& m);
/// Moments of W = nu / chi^2_nu, the mixing variable of a Student t law.
MixtureMoments student_t_mixture_moments(double nu);

/// -Cov(X0 Y0, X0 + Y0) / Var(X0 + Y0), or 0 when the variance vanishes.
double optimal_shift_analytic(double cov_xy_sum, double var_sum);
/// sigma^2 after applying the optimal shift.
double optimal_shifted_variance(double var_product, double cov_xy_sum, double var_sum);

/// Closed forms for the discrete family: sums of z_i z_j V_C(I_i x I_j).
double kappa_discrete(const DiscreteSymmetricSpec& spec, const Copula& c);
double sigma2_discrete(const DiscreteSymmetricSpec& spec, const Copula& c);

/// Copula of (X^2, Y^2) for continuous G, evaluated at (u, v).
double squared_copula(const Copula& c, bool g_continuous, double u, double v);

/// sigma^2_G(C) when a closed form is known for the pair, otherwise nullopt.
std::optional<double> sigma2_closed_form(const ConcordanceInducing& g, const Copula& c);

} // namespace concord::analytics
