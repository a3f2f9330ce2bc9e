#include "cogl/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return cogl::run_cli(argc, argv, std::cout, std::cerr); }
