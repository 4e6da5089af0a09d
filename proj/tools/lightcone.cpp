#include "lightcone/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return lightcone::cli::main_entry(argc, argv, std::cout, std::cerr); }
