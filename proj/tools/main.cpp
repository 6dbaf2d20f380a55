#include "cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return finsler::cli::main(argc, argv, std::cout, std::cerr); }
