#include <iostream>

#include "mmf/cli/app.hpp"

int main(int argc, char** argv) { return mmf::run_cli(argc, argv, std::cout, std::cerr); }
