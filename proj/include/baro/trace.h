#ifndef BARO_TRACE_H_
#define BARO_TRACE_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "baro/core.h"

namespace baro {

enum class Algorithm { kBaro, kPrimal, kTopkFilter };

std::string_view AlgorithmName(Algorithm algorithm);
// Accepts "baro", "primal" and "topk". Throws InvalidParameter otherwise.
Algorithm ParseAlgorithm(std::string_view name);

// Everything the online algorithm decided at one time step.
struct StepRecord {
  int64_t time = 0;
  bool is_ro = true;
  Item item;
  std::optional<double> rank;  // weighted rank R_t; absent at adversarial times
  double fraction = 0.0;       // X^t_t (for the top-k filter: 0 or 1)
  bool tentative = false;      // T_t
  bool full_pick = false;
  bool blocked_main = false;
  bool blocked_outer = false;
  bool picked = false;  // X^alg_t
  double occupation = 0.0;            // O_t = W_t X^alg_t
  double tentative_occupation = 0.0;  // O'_t = W_t T_t

  bool blocked() const { return blocked_main || blocked_outer; }
};

struct Trace {
  Algorithm algorithm = Algorithm::kBaro;
  std::vector<StepRecord> records;
  ModelParams params;
  AlgoConstants constants;
  uint64_t seed = 0;

  // Value collected at random-order times.
  double RoValue() const;
  double TotalValue() const;
  double TotalOccupation() const;
};

// Result of re-checking the hard invariants of a trace.
struct InvariantReport {
  bool feasible = true;        // sum O_t <= k
  // Every window's occupation <= max(1, a4 ell k / n).
  bool window_safe = true;
  bool implications = true;    // picked => tentative and not blocked, etc.
  double total_occupation = 0.0;
  double max_window_occupation = 0.0;
  std::vector<std::string> violations;

  bool ok() const { return feasible && window_safe && implications; }
};

// Window safety is only asserted for BARO traces (the baselines have no
// outer constraint). Occupation sums are compared with a 1e-9 absolute slack
// for floating-point accumulation.
InvariantReport CheckTraceInvariants(const Trace& trace);

}  // namespace baro

#endif  // BARO_TRACE_H_
