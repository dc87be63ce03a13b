#include <string>
#include <vector>

#include "ccp/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return ccp::run_cli(args);
}
