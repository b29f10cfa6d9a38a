#include "concord/acceptance.hpp"

#include <iostream>

int main() {
    const auto results = concord::run_acceptance({});
    concord::print_acceptance(std::cout, results);
    std::size_t failed = 0;
    for (const auto& r : results) {
        if (!r.pass) ++failed;
    }
    std::cout << (results.size() - failed) << "/" << results.size() << " criteria passed\n";
    return failed == 0 ? 0 : 1;
}
