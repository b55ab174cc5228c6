#include <iostream>

#include "cli/commands.hpp"

int main(int argc, char** argv) { return bcspec::cli::run(argc, argv, std::cout, std::cerr); }
