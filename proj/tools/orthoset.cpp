#include "orthoset/cli/commands.hpp"

#include <iostream>

int main(int argc, char** argv) { return orthoset::cli::run(argc, argv, std::cout, std::cerr); }
