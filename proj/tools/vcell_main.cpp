#include <iostream>

#include "vcell/cli.hpp"

int main(int argc, char** argv) { return vcell::cli::run(argc, argv, std::cout, std::cerr); }
