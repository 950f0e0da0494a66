#include <iostream>

#include "pathlim/cli.hpp"

int main(int argc, char** argv) { return pathlim::run_cli(argc, argv, std::cout, std::cerr); }
