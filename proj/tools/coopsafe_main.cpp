#include <iostream>

#include "coopsafe/cli.hpp"

int main(int argc, char** argv) { return coopsafe::run_cli(argc, argv, std::cout, std::cerr); }
