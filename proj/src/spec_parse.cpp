#include "concord/spec_parse.hpp"

#include "concord/errors.hpp"
#include "concord/format.hpp"

#include <string>

namespace concord {

namespace {

std::vector<double> parse_list(std::string_view text) {
    std::vector<double> out;
    for (const auto& item : split(text, ',')) {
        out.push_back(parse_number(item));
    }
    return out;
}

std::vector<int> parse_int_list(std::string_view text) {
    std::vector<int> out;
    for (const auto& item : split(text, ',')) {
        const double x = parse_number(item);
        if (x != static_cast<double>(static_cast<int>(x))) {
            throw ContractError("expected an integer, got '" + item + "'");
        }
        out.push_back(static_cast<int>(x));
    }
    return out;
}

DiscreteSymmetricSpec discrete_from_parts(const std::vector<std::string>& parts) {
    DiscreteSymmetricSpec spec{parse_list(parts[2]), parse_list(parts[3])};
    if (static_cast<double>(spec.m()) != parse_number(parts[1])) {
        throw ContractError("discrete spec: m = " + parts[1] + " but " + std::to_string(spec.m()) +
                            " atoms were given");
    }
    return spec;
}

ConcordanceInducing parse_base_distribution(std::string_view text) {
    const auto parts = split(text, ':');
    const std::string& head = parts[0];
    const auto arity = [&](std::size_t k) {
        if (parts.size() != k) {
            throw ContractError("malformed distribution spec '" + std::string(text) + "'");
        }
    };
    if (head == "uniform") {
        arity(1);
        return make_uniform();
    }
    if (head == "bernoulli") {
        arity(1);
        return make_bernoulli();
    }
    if (head == "normal") {
        arity(1);
        return make_normal();
    }
    if (head == "mix0u6") {
        arity(1);
        return make_mixture_point_uniform();
    }
    if (head == "t") {
        arity(2);
        return make_student_t(parse_number(parts[1]));
    }
    if (head == "beta") {
        if (parts.size() == 3) {
            return make_beta(parse_number(parts[1]), parse_number(parts[2]));
        }
        arity(2);
        return make_symmetric_beta(parse_number(parts[1]));
    }
    if (head == "discrete") {
        arity(4);
        return make_discrete(discrete_from_parts(parts));
    }
    throw ContractError("unknown distribution '" + std::string(text) + "'");
}

} // namespace

DistributionRequest parse_distribution(std::string_view text) {
    const auto plus = text.find('+');
    if (plus == std::string_view::npos) {
        return {parse_base_distribution(text), false};
    }
    auto base = parse_base_distribution(text.substr(0, plus));
    const std::string_view suffix = text.substr(plus + 1);
    constexpr std::string_view tag = "shift:";
    if (suffix.substr(0, tag.size()) != tag) {
        throw ContractError("unknown distribution modifier '" + std::string(suffix) + "'");
    }
    const std::string_view value = suffix.substr(tag.size());
    if (value == "opt") {
        return {std::move(base), true};
    }
    return {shifted(base, parse_number(value)), false};
}

DiscreteSymmetricSpec parse_discrete_spec(std::string_view text) {
    if (text == "bernoulli") {
        return blomqvist_spec();
    }
    const auto parts = split(text, ':');
    if (parts.size() != 4 || parts[0] != "discrete") {
        throw ContractError("expected discrete:<m>:<z-list>:<p-list>, got '" + std::string(text) + "'");
    }
    return discrete_from_parts(parts);
}

Copula parse_copula(std::string_view text) {
    const auto plus = text.rfind('+');
    if (plus != std::string_view::npos) {
        const std::string_view tag = text.substr(plus + 1);
        Reflection phi;
        if (tag == "nu1") {
            phi = Reflection::nu1;
        } else if (tag == "nu2") {
            phi = Reflection::nu2;
        } else if (tag == "nu1nu2") {
            phi = Reflection::nu1nu2;
        } else {
            throw ContractError("unknown reflection '" + std::string(tag) + "'");
        }
        return reflect(parse_copula(text.substr(0, plus)), phi);
    }
    if (text == "M") return comonotone();
    if (text == "W") return countermonotone();
    if (text == "Pi") return independence();

    const auto parts = split(text, ':');
    const std::string& head = parts[0];
    if (head == "frechet" && parts.size() == 2) {
        const auto w = parse_list(parts[1]);
        if (w.size() != 3) {
            throw ContractError("frechet spec needs three weights pM,pPi,pW");
        }
        return frechet({w[0], w[1], w[2]});
    }
    if (head == "gauss" && parts.size() == 2) {
        return gaussian(parse_number(parts[1]));
    }
    if (head == "t" && parts.size() == 2) {
        const auto p = parse_list(parts[1]);
        if (p.size() != 2) {
            throw ContractError("t copula spec is t:<rho>,<nu>");
        }
        return student_t_copula(p[0], p[1]);
    }
    if (head == "clayton" && parts.size() == 2) {
        return clayton(parse_number(parts[1]));
    }
    if (head == "shuffle" && parts.size() == 4) {
        auto perm = parse_int_list(parts[2]);
        auto flips = parse_int_list(parts[3]);
        if (static_cast<double>(perm.size()) != parse_number(parts[1])) {
            throw ContractError("shuffle spec: n = " + parts[1] + " but the permutation has " +
                                std::to_string(perm.size()) + " entries");
        }
        return shuffle_of_m(ShuffleSpec::equal_strips(std::move(perm), std::move(flips)));
    }
    throw ContractError("unknown copula '" + std::string(text) + "'");
}

} // namespace concord
