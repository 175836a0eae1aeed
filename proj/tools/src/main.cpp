#include <iostream>

#include "reluland_cli/cli.hpp"

int main(int argc, char** argv) { return reluland::cli::run(argc, argv, std::cout, std::cerr); }
