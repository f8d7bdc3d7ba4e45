#include <string>
#include <vector>

#include "hopmdp/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return hopmdp::run_cli(args);
}
