#include <iostream>
#include <string>
#include <vector>

#include "gsit/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return gsit::lab::cli_main(args, std::cout, std::cerr);
}
