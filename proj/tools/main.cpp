#include <iostream>
#include <string>
#include <vector>

#include "plankforge/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return plankforge::cli::run(std::move(args), std::cout, std::cerr);
}
