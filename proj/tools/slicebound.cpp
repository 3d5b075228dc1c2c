#include <iostream>

#include "slicebound/cli.hpp"

int main(int argc, char** argv) { return slicebound::cli_main(argc, argv, std::cout, std::cerr); }
