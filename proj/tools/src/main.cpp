#include "homoglab_cli/cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
  return homoglab::cli::run(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
