#include <string>
#include <vector>

#include "enmi/cli.hpp"

int main(int argc, char** argv) {
  return enmi::cli::main_entry(std::vector<std::string>(argv + 1, argv + argc));
}
