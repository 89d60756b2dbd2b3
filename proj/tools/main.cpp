#include <iostream>

#include "regulo/cli.hpp"

int main(int argc, char** argv) { return regulo::run_cli(argc, argv, std::cout, std::cerr); }
