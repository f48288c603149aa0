#include <iostream>
#include <string>
#include <vector>

#include "gravchan/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return gravchan::cli::run(args, std::cout, std::cerr);
}
