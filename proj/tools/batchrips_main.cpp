#include <iostream>

#include "batchrips/cli.hpp"

int main(int argc, char** argv) { return batchrips::cli_dispatch(argc, argv, std::cout, std::cerr); }
