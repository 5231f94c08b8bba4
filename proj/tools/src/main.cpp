#include <iostream>

#include "tsdantzig_cli/cli.hpp"

int main(int argc, char** argv) { return tsdantzig::cli::run_cli(argc, argv, std::cout, std::cerr); }
