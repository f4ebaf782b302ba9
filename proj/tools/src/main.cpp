#include <iostream>

#include "nss/cli.hpp"

int main(int argc, char** argv) { return nss::cli::main_entry(argc, argv, std::cout, std::cerr); }
