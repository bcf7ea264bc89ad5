#include <iostream>

#include "newsclust/cli.hpp"

int main(int argc, char** argv) { return newsclust::run_cli(argc, argv, std::cout, std::cerr); }
