#include <iostream>

#include "qcamsim/cli.hpp"

int main(int argc, char** argv) { return qcamsim::cli::main(argc, argv, std::cout, std::cerr); }
