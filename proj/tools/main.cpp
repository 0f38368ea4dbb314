#include <iostream>

#include "treejudge/cli.hpp"

int main(int argc, char** argv) { return treejudge::cli_dispatch(argc, argv, std::cout, std::cerr); }
