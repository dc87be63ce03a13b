#pragma once

#include <iostream>
#include <string>
#include <vector>

namespace ccp {

// Command-line front end: validate, simulate, evaluate, compare.
// args excludes the program name. Returns the process exit code; every
// failure path prints a diagnostic to stderr and returns non-zero.
// Output that would go to stdout is written to out, so callers can capture
// it.
int run_cli(const std::vector<std::string>& args, std::ostream& out = std::cout);

}  // namespace ccp
