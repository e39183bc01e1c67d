#ifndef BARO_ALGO_H_
#define BARO_ALGO_H_

#include <cstdint>
#include <utility>
#include <vector>

#include "baro/adversary.h"
#include "baro/core.h"
#include "baro/lp.h"
#include "baro/trace.h"

namespace baro {

// State of the online BARO algorithm after steps 1..step().
class AlgoState {
 public:
  AlgoState(const ModelParams& params, const AlgoConstants& constants);

  int64_t step() const { return step_; }
  // Sum of O_t' over t' <= step().
  double total_occupation() const { return total_occupation_; }
  // Occupation of window `index` so far.
  double window_occupation(int64_t index) const {
    return window_occupation_[index];
  }
  const ModelParams& params() const { return params_; }
  const AlgoConstants& constants() const { return constants_; }

  // Processes the item at time step() + 1. `tie` orders equal densities.
  StepRecord Advance(const Item& item, uint64_t tie);

 private:
  ModelParams params_;
  AlgoConstants constants_;
  PrefixLp lp_;
  int64_t step_ = 0;
  double total_occupation_ = 0.0;
  std::vector<double> window_occupation_;
};

// One step as a pure transition. `t` must equal state.step() + 1.
std::pair<StepRecord, AlgoState> Step(AlgoState state, const Item& item,
                                      int64_t t, uint64_t tie);

// Runs the BARO algorithm over a schedule. Adaptive adversaries are queried
// at their times with the decisions made so far.
Trace Run(const Schedule& schedule, const AlgoConstants& constants);

// Primal baseline: LP with budget ceil(t k / n), no window constraints,
// permanent pick iff the prior occupation is at most k - 1.
Trace RunBaselinePrimal(const Schedule& schedule);

// Top-k filter baseline: rejects the first floor(n / e) arrivals, then picks
// an item iff its value is among the k best seen so far and exceeds the
// sample maximum, for at most floor(k) picks.
Trace RunBaselineTopkFilter(const Schedule& schedule);

Trace RunAlgorithm(Algorithm algorithm, const Schedule& schedule,
                   const AlgoConstants& constants);

// Re-solves LP_t from scratch with SolveGreedy for every prefix of a BARO
// trace and returns the times whose recorded tentative flag disagrees.
// Quadratic; meant for small traces.
std::vector<int64_t> ReplayTentativeMismatches(const Trace& trace,
                                               const Schedule& schedule);

}  // namespace baro

#endif  // BARO_ALGO_H_
