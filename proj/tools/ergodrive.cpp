#include <iostream>

#include "ergo/cli/app.hpp"

int main(int argc, char** argv) {
  return ergo::cli::run_app(argc, argv, std::cout, std::cerr);
}
