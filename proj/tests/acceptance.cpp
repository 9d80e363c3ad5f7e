// Runs the acceptance criteria and prints one PASS/FAIL line per criterion.
#include "cclab/acceptance.hpp"

#include <cstdlib>
#include <iostream>

int main(int argc, char** argv) {
  cclab::AcceptanceOptions opt;
  if (const char* s = std::getenv("CCLAB_SEED")) opt.seed = static_cast<unsigned>(std::strtoul(s, nullptr, 10));
  bool verbose = argc > 1 && std::string(argv[1]) == "-v";
  int failed = 0;
  cclab::run_acceptance(opt, [&](const cclab::CriterionResult& r) {
    std::cout << cclab::format_row(r) << std::endl;
    if (verbose || !r.pass) std::cout << "      " << cclab::to_json(r).dump() << std::endl;
    if (!r.pass) ++failed;
  });
  std::cout << (failed ? "acceptance: " + std::to_string(failed) + " criteria failed" : std::string("acceptance: all criteria pass"))
            << std::endl;
  return failed ? 1 : 0;
}
