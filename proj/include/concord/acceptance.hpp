#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace concord {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::size_t checks = 0;
    std::size_t failures = 0;
    std::string detail; ///< worst margin and the first failing checks
    double seconds = 0.0;
};

struct AcceptanceOptions {
    std::uint64_t base_seed = 20240611;
    std::vector<int> only; ///< empty runs all twelve criteria
    unsigned threads = 0;
};

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opts);

/// One line per criterion: "PASS 3 frechet-surface checks=75 failed=0 ...".
void print_acceptance(std::ostream& out, const std::vector<CriterionResult>& results);

} // namespace concord
