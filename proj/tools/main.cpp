#include <iostream>

#include "heightlab/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return heightlab::dispatch(args, std::cout, std::cerr);
}
