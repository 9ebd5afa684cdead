#include <iostream>

#include "agrione/cli.hpp"

int main(int argc, char** argv) {
    return agrione::cli::run(argc, argv, std::cout, std::cerr);
}
