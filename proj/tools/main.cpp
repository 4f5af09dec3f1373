#include <iostream>

#include "slk/cli.hpp"

int main(int argc, char** argv) { return slk::cli::parse_and_dispatch(argc, argv, std::cout, std::cerr); }
