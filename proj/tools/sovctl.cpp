#include <iostream>

#include "sov/cli/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv, argv + argc);
    return sov::cli::run(args, std::cout, std::cerr);
}
