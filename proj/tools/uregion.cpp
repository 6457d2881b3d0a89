#include <iostream>

#include "uregion/cli.hpp"

int main(int argc, char** argv) { return uregion::run_cli(argc, argv, std::cout, std::cerr); }
