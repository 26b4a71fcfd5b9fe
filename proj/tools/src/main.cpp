#include <iostream>

#include "dnscatter_cli/cli.hpp"

int main(int argc, char** argv) { return dnscatter::cli::run_cli(argc, argv, std::cout, std::cerr); }
