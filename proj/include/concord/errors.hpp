#pragma once

#include <stdexcept>
#include <string>

namespace concord {

/// Raised when an operation is not available for a given object, e.g. the
/// CDF of a Student t copula or a closed form that has not been derived.
class CapabilityError : public std::runtime_error {
public:
    explicit CapabilityError(const std::string& what) : std::runtime_error(what) {}
};

/// Raised when an argument violates an operation's precondition.
class ContractError : public std::invalid_argument {
public:
    explicit ContractError(const std::string& what) : std::invalid_argument(what) {}
};

} // namespace concord
