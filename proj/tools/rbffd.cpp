#include <iostream>

#include "rbffd/cli.hpp"

int main(int argc, char** argv) {
    return rbffd::cli::run(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
