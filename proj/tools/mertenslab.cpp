#include <iostream>

#include <mertenslab/cli.hpp>

int main(int argc, char** argv) {
  return mertenslab::cli::run(argc, argv, std::cout, std::cerr);
}
