#include <iostream>

#include <qdissect/cli.hpp>

int main(int argc, char** argv) { return qdissect::cli::run(argc, argv, std::cout, std::cerr); }
