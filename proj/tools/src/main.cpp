#include <iostream>

#include "lawprice_cli/commands.hpp"

int main(int argc, char** argv) { return lawprice::cli::run(argc, argv, std::cout, std::cerr); }
