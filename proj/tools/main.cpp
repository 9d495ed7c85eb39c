#include <iostream>
#include <string>
#include <vector>

#include "sldiff/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return sldiff::run_cli(args, std::cout, std::cerr);
}
