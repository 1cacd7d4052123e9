#include <iostream>

#include "qpr/cli.hpp"

int main(int argc, char** argv) { return qpr::cli::parse_and_dispatch(argc, argv, std::cout, std::cerr); }
