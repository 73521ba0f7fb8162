#include <iostream>
#include <string>
#include <vector>

#include "pgc/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return pgc::cli_dispatch(std::move(args), std::cout, std::cerr);
}
