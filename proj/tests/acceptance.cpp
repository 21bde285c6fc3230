// Runs the acceptance suite: one pass/fail line per criterion, exit 0 iff all
// criteria pass. An optional argument overrides the seed of the randomized
// criteria.

#include <cstdlib>
#include <iostream>

#include "pccfl/selftest.hpp"

int main(int argc, char** argv) {
  unsigned seed = pccfl::selftest::kDefaultSeed;
  if (argc > 1) seed = static_cast<unsigned>(std::strtoul(argv[1], nullptr, 10));
  return pccfl::selftest::run_selftest(std::cout, seed) ? 0 : 1;
}
