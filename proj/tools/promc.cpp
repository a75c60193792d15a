#include <iostream>

#include "promc/cli.hpp"

int main(int argc, char** argv) { return promc::cli::run(argc, argv, std::cout, std::cerr); }
