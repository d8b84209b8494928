#include <iostream>

#include "classim/cli/app.hpp"

int main(int argc, char** argv) { return classim::cli::run(argc, argv, std::cout, std::cerr); }
