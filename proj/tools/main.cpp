#include "concord/cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
    return concord::dispatch(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
