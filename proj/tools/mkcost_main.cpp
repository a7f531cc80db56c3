#include <iostream>

#include "mkcost/cli.hpp"

int main(int argc, char** argv) { return mkcost::run_cli(argc, argv, std::cout, std::cerr); }
