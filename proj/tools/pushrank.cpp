#include <iostream>

#include "pushrank/cli.hpp"

int main(int argc, char** argv) { return pushrank::cli::run_cli(argc, argv, std::cout, std::cerr); }
