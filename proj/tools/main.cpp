#include <string>
#include <vector>

#include "fxlabel/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return fxlabel::cli_dispatch(args);
}
