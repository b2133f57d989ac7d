#include <iostream>

#include "stg/cli.hpp"

int main(int argc, char** argv) { return stg::cli::run(argc, argv, std::cin, std::cout, std::cerr); }
