#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace concord {

/// Shortest decimal text that round-trips to the same double.
std::string format_number(double value);

std::vector<std::string> split(std::string_view text, char sep);

/// Parses a full string as a double; throws ContractError otherwise.
double parse_number(std::string_view text);

} // namespace concord
