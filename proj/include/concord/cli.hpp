#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace concord {

enum ExitStatus { kExitOk = 0, kExitUsage = 2, kExitCapability = 3, kExitAcceptance = 4 };

/// Runs one verb (analytic, estimate, simulate, figure, selftest). `args`
/// excludes the program name.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace concord
