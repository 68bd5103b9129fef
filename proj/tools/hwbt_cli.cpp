#include <iostream>
#include <string>
#include <vector>

#include "hwbt/cli_run.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return hwbt::cli::cli_run(args, std::cout, std::cerr);
}
