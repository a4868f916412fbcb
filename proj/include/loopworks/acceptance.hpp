#ifndef LOOPWORKS_ACCEPTANCE_HPP
#define LOOPWORKS_ACCEPTANCE_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "loopworks/rng.hpp"
#include "loopworks/stats.hpp"

namespace loopworks {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = true;
  std::vector<CheckResult> checks;
};

// Full verification suite; prints one pass/fail line per criterion to `log`
// and returns the per-criterion results.
std::vector<CriterionResult> run_acceptance_suite(std::uint64_t seed, std::ostream& log);

bool all_pass(const std::vector<CriterionResult>& results);

}  // namespace loopworks

#endif
