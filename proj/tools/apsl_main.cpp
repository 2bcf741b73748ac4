#include "apsl/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return apsl::run_cli(argc, argv, std::cout, std::cerr); }
