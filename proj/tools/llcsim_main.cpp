#include <string>
#include <vector>

#include "llcsim/cli.hpp"

int main(int argc, char** argv) {
  return llcsim::dispatch(std::vector<std::string>(argv + 1, argv + argc));
}
