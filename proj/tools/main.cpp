#include <iostream>

#include "cwp/cli.hpp"

int main(int argc, char** argv) { return cwp::run_cli(argc, argv, std::cout, std::cerr); }
