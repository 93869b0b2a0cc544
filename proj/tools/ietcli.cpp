#include <iostream>

#include "iet/cli.hpp"

int main(int argc, char** argv) { return iet::cli::run(argc, argv, std::cout, std::cerr); }
