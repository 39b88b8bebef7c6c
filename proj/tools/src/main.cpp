#include <iostream>

#include "evidenza/cli.hpp"

int main(int argc, char** argv) { return evidenza::run_cli(argc, argv, std::cout, std::cerr); }
