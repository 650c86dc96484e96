#include <string>
#include <vector>

#include "dgplab/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return dgplab::cli::run(args);
}
