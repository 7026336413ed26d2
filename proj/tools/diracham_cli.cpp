#include "diracham/commands.hpp"

#include <iostream>

int main(int argc, char** argv) { return diracham::run_cli(argc, argv, std::cout, std::cerr); }
