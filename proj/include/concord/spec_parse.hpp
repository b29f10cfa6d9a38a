#pragma once

#include "concord/copulas.hpp"
#include "concord/distributions.hpp"

#include <string>
#include <string_view>

namespace concord {

/// uniform | bernoulli | normal | t:<nu> | beta:<alpha> | mix0u6 |
/// discrete:<m>:<z1,...,zm>:<p0,...,pm>, optionally followed by +shift:<mu>.
/// `+shift:opt` is left to the caller and reported through `optimal_shift`.
struct DistributionRequest {
    ConcordanceInducing g;
    bool optimal_shift = false;
};

DistributionRequest parse_distribution(std::string_view text);

/// The DiscreteSymmetricSpec behind `discrete:...`; `bernoulli` maps to the
/// one-atom spec.
DiscreteSymmetricSpec parse_discrete_spec(std::string_view text);

/// M | W | Pi | frechet:<pM>,<pPi>,<pW> | gauss:<rho> | t:<rho>,<nu> |
/// clayton:<theta> | shuffle:<n>:<perm>:<flips>
Copula parse_copula(std::string_view text);

} // namespace concord
