#include <iostream>

#include "kerrpair/cli.hpp"

int main(int argc, char** argv) { return kerrpair::cli::run_cli(argc, argv, std::cout, std::cerr); }
