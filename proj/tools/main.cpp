#include <iostream>

#include "cli.hpp"

int main(int argc, char** argv) { return nscost::cli::run(argc, argv, std::cout, std::cerr); }
