#include <iostream>
#include <string>
#include <vector>

#include "tka/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return tka::cli::run(args, std::cin, std::cout, std::cerr);
}
