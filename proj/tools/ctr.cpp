#include <iostream>

#include "ctr/commands.hpp"

int main(int argc, char** argv) { return ctr::run_cli(argc, argv, std::cout, std::cerr); }
