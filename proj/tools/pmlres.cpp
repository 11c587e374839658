#include "pmlres/commands.hpp"

#include <iostream>

int main(int argc, char** argv) { return pmlres::run_cli(argc, argv, std::cout, std::cerr); }
