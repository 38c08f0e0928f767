#include <iostream>

#include "fiid/cli.hpp"

int main(int argc, char **argv) { return fiid::cli::main_entry(argc, argv, std::cout, std::cerr); }
