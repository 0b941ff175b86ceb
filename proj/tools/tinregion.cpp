#include "tinregion/cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  auto res = tin::run(args);
  std::cout << res.out;
  std::cerr << res.err;
  return res.exit_code;
}
