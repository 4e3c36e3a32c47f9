#include "sshl/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return sshl::cli::run(argc, argv, std::cout, std::cerr); }
