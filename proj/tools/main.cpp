#include <unistd.h>

#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include "colliderbn/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  colliderbn::CliEnvironment env;
  env.color = colliderbn::color_enabled(std::getenv("NO_COLOR"), isatty(STDOUT_FILENO) != 0);
  return colliderbn::run_cli(args, std::cin, std::cout, std::cerr, env);
}
