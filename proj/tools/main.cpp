#include <iostream>

#include "rmtq/cli.hpp"

int main(int argc, char** argv) { return rmtq::run_cli(argc, argv, std::cout, std::cerr); }
