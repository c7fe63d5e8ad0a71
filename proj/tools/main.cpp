#include "cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return bbem::cli::run(argc, argv, std::cout, std::cerr); }
