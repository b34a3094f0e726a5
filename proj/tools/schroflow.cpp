#include <iostream>

#include "schroflow/cli.hpp"

int main(int argc, char** argv) { return schroflow::cli::run(argc, argv, std::cout, std::cerr); }
