#include <iostream>

#include "lapstream/cli.hpp"

int main(int argc, char** argv) { return lapstream::cli_main(argc, argv, std::cout, std::cerr); }
