#ifndef BARO_VERIFY_H_
#define BARO_VERIFY_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "baro/lp.h"
#include "baro/rng.h"

namespace baro {

// Pass/flag/fail tally of one checker.
struct CheckTally {
  explicit CheckTally(std::string n = {}) : name(std::move(n)) {}

  std::string name;
  int64_t pass = 0;
  int64_t flag = 0;
  int64_t fail = 0;
  // Extra counters worth printing (e.g. literal-form counterexamples).
  std::vector<std::pair<std::string, int64_t>> notes;
  // First few failure descriptions.
  std::vector<std::string> failures;

  int64_t total() const { return pass + flag + fail; }
  void Record(bool ok, const std::string& what);
};

struct SuiteReport {
  std::string suite;
  std::vector<CheckTally> checks;

  int64_t fails() const;
  bool ok() const { return fails() == 0; }
};

// Suite names accepted by RunSuite.
const std::vector<std::string>& SuiteNames();
bool IsSuite(std::string_view name);

// `cases` <= 0 selects the suite's default size:
//   lp-equivalence  1000 instances with at most 12 entries
//   lemma-sat       10000 scenarios
//   lemma-lbpick    10000 scenarios meeting the hypotheses
//   bernstein       12 configurations, 1e5 samples each (cases = samples)
//   inequalities    Chebyshev sums (1e5 triples, cases = triples), sampling
//                   comparison, moment grid and psi integrals
// Throws InvalidParameter on an unknown suite.
SuiteReport RunSuite(std::string_view suite, uint64_t seed, int64_t cases = 0);

// Random LP_t-shaped instance with 1..max_entries entries; equal densities
// occur with positive probability and some window caps are perturbed.
LpInstance RandomLpInstance(Rng& rng, size_t max_entries);

// The fixed Bernstein grid: (pool, sample size, tau).
struct BernsteinConfig {
  std::string label;
  std::vector<double> pool;
  int64_t s = 1;
  double tau = 0.0;
};
std::vector<BernsteinConfig> BernsteinGrid(uint64_t seed);

}  // namespace baro

#endif  // BARO_VERIFY_H_
