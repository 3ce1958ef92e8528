#include <iostream>

#include "spencer/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return spencer::run_cli(args, std::cout, std::cerr);
}
