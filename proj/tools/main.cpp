#include <iostream>

#include "hml/cli.hpp"

int main(int argc, char** argv) { return hml::run_command(argc, argv, std::cout, std::cerr); }
