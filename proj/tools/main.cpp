#include <iostream>

#include "hvalence_cli.hpp"

int main(int argc, char** argv) { return hvalence::cli::run(argc, argv, std::cout, std::cerr); }
