#include <string>
#include <vector>

#include "privsq/cli.hpp"

int main(int argc, char** argv) {
  return privsq::run_cli(std::vector<std::string>(argv + 1, argv + argc));
}
