#include "mtlrc/validate.hpp"

#include <cstdlib>
#include <iostream>
#include <string>

int main(int argc, char** argv) {
  std::uint64_t seed = 1;
  if (argc > 1) seed = std::strtoull(argv[1], nullptr, 10);
  const auto results = mtlrc::run_validation(seed, std::cout);
  return mtlrc::all_passed(results) ? 0 : 1;
}
