#include <iostream>

#include "orc/cli.hpp"

int main(int argc, char** argv) { return orc::cli::run(argc, argv, std::cout, std::cerr); }
