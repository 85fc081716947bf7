#include <iostream>

#include "addm/cli.hpp"

int main(int argc, char** argv) { return addm::run_cli(argc, argv, std::cout, std::cerr); }
