#include <iostream>
#include <string>
#include <vector>

#include "khlab/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return khlab::cli::run(args, std::cout, std::cerr);
}
