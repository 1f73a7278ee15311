#include <iostream>
#include <string>
#include <vector>

#include "cvbell/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return cvbell::cli::run(args, std::cout, std::cerr);
}
