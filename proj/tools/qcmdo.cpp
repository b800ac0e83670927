#include <iostream>

#include "qcmdo/cli.hpp"

int main(int argc, char** argv) {
    return qcmdo::run_cli(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
