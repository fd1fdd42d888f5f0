#include <iostream>

#include "motioncone/cli.hpp"

int main(int argc, char** argv) {
  motioncone::configure_logging();
  return motioncone::run_cli({argv + 1, argv + argc}, std::cout, std::cerr);
}
