#include <iostream>

#include "polyfair/cli/commands.hpp"

int main(int argc, char** argv) { return polyfair::cli::run(argc, argv, std::cout, std::cerr); }
