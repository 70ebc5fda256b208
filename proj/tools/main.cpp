#include <iostream>

#include "corsica/cli/cli.hpp"

int main(int argc, char** argv) { return corsica::cli::run(argc, argv, std::cout, std::cerr); }
