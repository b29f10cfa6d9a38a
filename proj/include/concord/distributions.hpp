#pragma once

#include <span>
#include <string>
#include <variant>
#include <vector>

namespace concord {

enum class SupportKind { bounded, unbounded, discrete };

/// Parameters of a finite symmetric law on {-z_m, ..., -z_1, 0, z_1, ..., z_m}
/// with probabilities (p_m, ..., p_1, p_0, p_1, ..., p_m).
struct DiscreteSymmetricSpec {
    std::vector<double> z; ///< z_1 < ... < z_m, all positive
    std::vector<double> p; ///< p_0, p_1, ..., p_m

    std::size_t m() const { return z.size(); }

    /// Throws ContractError naming the violated constraint.
    void validate() const;
};

/// Closed interval [lo, hi] of (0,1) on which the discrete quantile equals `value`.
struct QuantileInterval {
    int index; ///< -m, ..., m
    double lo;
    double hi;
    double value;
};

namespace laws {
struct Uniform {};
struct Bernoulli {};
struct Normal {};
struct StudentT {
    double nu;
    double scale; ///< sqrt((nu - 2) / nu)
};
struct SymmetricBeta {
    double alpha;
    double sd; ///< standard deviation of Beta(alpha, alpha)
};
struct Discrete {
    std::vector<double> atoms;      ///< ascending
    std::vector<double> cumulative; ///< P(X <= atoms[k])
};
struct PointUniformMixture {};
} // namespace laws

using Law = std::variant<laws::Uniform, laws::Bernoulli, laws::Normal, laws::StudentT,
                         laws::SymmetricBeta, laws::Discrete, laws::PointUniformMixture>;

/// A concordance-inducing distribution: standardized (mean 0, variance 1),
/// radially symmetric, finite fourth moment, optionally shifted by a location
/// offset. Immutable once built.
class ConcordanceInducing {
public:
    const std::string& name() const { return name_; }
    SupportKind support_kind() const { return support_; }
    double shift() const { return shift_; }
    bool is_shifted() const { return shifted_; }
    bool is_continuous() const;

    /// Left-continuous generalized inverse. Throws ContractError for p outside (0,1).
    double quantile(double p) const;

    /// Vectorized quantile; `out` must have the size of `p`. No range checks.
    void quantiles(std::span<const double> p, std::span<double> out) const;

    double cdf(double x) const;

    /// Var_G(X^2) and E_G[X^4] of the unshifted law. Throw ContractError on
    /// shifted laws, whose metadata is not maintained.
    double var_x_squared() const;
    double fourth_moment() const;

    /// Partition of (0,1) into the quantile's constancy intervals; only for
    /// discrete laws built from a DiscreteSymmetricSpec.
    const std::vector<QuantileInterval>& partition() const;

    const Law& law() const { return law_; }

private:
    friend ConcordanceInducing make_uniform();
    friend ConcordanceInducing make_bernoulli();
    friend ConcordanceInducing make_normal();
    friend ConcordanceInducing make_student_t(double);
    friend ConcordanceInducing make_symmetric_beta(double);
    friend ConcordanceInducing make_discrete(const DiscreteSymmetricSpec&);
    friend ConcordanceInducing make_mixture_point_uniform();
    friend ConcordanceInducing shifted(const ConcordanceInducing&, double);

    ConcordanceInducing(std::string name, Law law, SupportKind support, double fourth_moment)
        : name_(std::move(name)), law_(std::move(law)), support_(support),
          fourth_moment_(fourth_moment) {}

    double base_quantile(double p) const;

    std::string name_;
    Law law_;
    SupportKind support_;
    double fourth_moment_;
    double shift_ = 0.0;
    bool shifted_ = false;
    std::vector<QuantileInterval> partition_;
};

enum class BuiltinKind { uniform, bernoulli, normal, student_t, beta };

/// Builds the standardized member of a builtin family. `parameter` is the
/// degrees of freedom for student_t (must exceed 4) and the shape alpha for
/// the symmetric beta; ignored otherwise.
ConcordanceInducing make_builtin(BuiltinKind kind, double parameter = 0.0);

ConcordanceInducing make_uniform();   ///< Unif(-sqrt 3, sqrt 3)
ConcordanceInducing make_bernoulli(); ///< +-1 with probability 1/2
ConcordanceInducing make_normal();
ConcordanceInducing make_student_t(double nu);
ConcordanceInducing make_symmetric_beta(double alpha);
/// Asymmetric Beta(alpha, beta) is rejected; only exists to report that.
ConcordanceInducing make_beta(double alpha, double beta);
ConcordanceInducing make_discrete(const DiscreteSymmetricSpec& spec);
/// Equal mixture of a point mass at 0 and Unif(-sqrt 6, sqrt 6).
ConcordanceInducing make_mixture_point_uniform();

/// G_mu(x) = G(x - mu). Rejects laws that already carry a shift.
ConcordanceInducing shifted(const ConcordanceInducing& g, double mu);

/// Spec with m = 1, z = (1), p = (0, 1/2): the law behind Blomqvist's beta.
DiscreteSymmetricSpec blomqvist_spec();

/// Uniform law on {-a/b, -b, b, a/b} with a = 1/sqrt 2, b = sqrt(1 - sqrt 2 / 2).
DiscreteSymmetricSpec four_point_spec();

} // namespace concord
