#include <string>
#include <vector>

#include "bsar/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return bsar::run_cli(args, {});
}
