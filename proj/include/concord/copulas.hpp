#pragma once

#include <cstdint>
#include <memory>
#include <random>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace concord {

/// A point (p_M, p_Pi, p_W) of the 3-simplex.
struct FrechetWeights {
    double p_m = 0.0;
    double p_pi = 0.0;
    double p_w = 0.0;

    void validate() const;
};

/// Shuffle-of-M: the unit interval is cut at `breakpoints` into strips J_1..J_n
/// and strip J_i is carried onto the target strip at position permutation[i]
/// (1-based) on the v-axis, increasing when flips[i] == -1 and decreasing when
/// flips[i] == +1. Target strips are laid out so that each has the width of
/// the strip mapped onto it.
struct ShuffleSpec {
    std::vector<double> breakpoints; ///< 0 = b_0 < ... < b_n = 1
    std::vector<int> permutation;    ///< values 1..n
    std::vector<int> flips;          ///< values -1 or +1

    std::size_t n() const { return permutation.size(); }
    void validate() const;

    /// n equal-width strips.
    static ShuffleSpec equal_strips(std::vector<int> permutation, std::vector<int> flips);
};

enum class Reflection { nu1, nu2, nu1nu2 };

class Copula;

namespace families {
struct Comonotone {};
struct Countermonotone {};
struct Independence {};
struct Frechet {
    FrechetWeights w;
};
struct Gaussian {
    double rho;
};
struct StudentT {
    double rho;
    double nu;
};
struct Clayton {
    double theta;
};
struct Shuffle {
    ShuffleSpec spec;
    std::vector<double> target_lo; ///< lower end of each strip's image on the v-axis
};
struct Reflected {
    std::shared_ptr<const Copula> base;
    Reflection phi;
};
} // namespace families

using Family = std::variant<families::Comonotone, families::Countermonotone,
                            families::Independence, families::Frechet, families::Gaussian,
                            families::StudentT, families::Clayton, families::Shuffle,
                            families::Reflected>;

struct UV {
    double u;
    double v;
};

using Rng = std::mt19937_64;

/// Bivariate copula. Immutable value; copies share reflected bases.
class Copula {
public:
    explicit Copula(Family family) : family_(std::move(family)) {}

    const Family& family() const { return family_; }
    std::string describe() const;

    bool sampleable() const { return true; }
    bool cdf_available() const;

    /// Throws CapabilityError when no closed-form CDF is implemented.
    double cdf(double u, double v) const;

    /// Draws one pair using the caller's generator.
    UV draw(Rng& rng) const;

private:
    Family family_;
};

Copula comonotone();
Copula countermonotone();
Copula independence();
Copula frechet(const FrechetWeights& w);
Copula gaussian(double rho);
Copula student_t_copula(double rho, double nu);
/// theta >= -1; theta = -1 is W, |theta| < 1e-8 is Pi.
Copula clayton(double theta);
Copula shuffle_of_m(const ShuffleSpec& spec);
Copula reflect(const Copula& c, Reflection phi);

/// n i.i.d. draws with a generator seeded from `seed`.
std::vector<UV> sample(const Copula& c, std::size_t n, std::uint64_t seed);

double rectangle_volume(const Copula& c, double u1, double u2, double v1, double v2);

/// C(1/2, 1/2); elliptical families (and their reflections) use the arcsine identity.
double survival_at_center(const Copula& c);

/// p(C) = C(1/2,1/2) + survival(1/2,1/2) = 2 C(1/2, 1/2).
double p_balance(const Copula& c);

/// Uniform on the open unit interval, never exactly 0 or 1.
double open_unit(Rng& rng);

} // namespace concord
