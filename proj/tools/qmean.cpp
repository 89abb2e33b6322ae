#include <iostream>

#include "qmean/cli.hpp"

int main(int argc, char** argv) { return qmean::cli::run(argc, argv, std::cout, std::cerr); }
