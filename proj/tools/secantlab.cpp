#include <iostream>

#include "secantlab/cli.hpp"

int main(int argc, char** argv) { return secantlab::cli::main_entry(argc, argv, std::cout, std::cerr); }
