// primehit: exact, bounds, simulate and verify commands.

#include <iostream>
#include <string>
#include <vector>

#include "primehit/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return primehit::cli::main_entry(args, std::cout, std::cerr);
}
