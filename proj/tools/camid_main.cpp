#include <iostream>
#include <string>
#include <vector>

#include "camid/commands.hpp"

int main(int argc, char** argv) {
  return camid::cli::run(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
