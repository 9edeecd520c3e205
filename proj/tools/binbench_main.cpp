#include <iostream>
#include <string>
#include <vector>

#include "binbench/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv, argv + argc);
    return binbench::cli::run(args, std::cout, std::cerr);
}
