#include <iostream>

#include "sqfap_cli.hpp"

int main(int argc, char** argv) { return sqfap::cli::run(argc, argv, std::cout, std::cerr); }
