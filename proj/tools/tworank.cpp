#include <iostream>
#include <string>
#include <vector>

#include "tworank/cli.hpp"

int main(int argc, char **argv)
{
  std::vector<std::string> args(argv + 1, argv + argc);
  return tworank::cli::dispatch(args, std::cout, std::cerr);
}
