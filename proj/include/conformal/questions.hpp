#ifndef CONFORMAL_QUESTIONS_HPP
#define CONFORMAL_QUESTIONS_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace conformal {

struct Verdict {
  std::string id;
  bool pass = false;
  std::string detail;
};

/// Executes the nine supervised questions and their nine unsupervised twins
/// as randomized checks: claim-equivalence loops, monotonicity witnesses, and
/// oracle region-topology assertions. Failures are verdicts, not errors.
std::vector<Verdict> run_counterexample_suite(long long trials, std::uint64_t seed);

}  // namespace conformal

#endif  // CONFORMAL_QUESTIONS_HPP
