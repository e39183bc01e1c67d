#ifndef BARO_LP_H_
#define BARO_LP_H_

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "baro/core.h"
#include "baro/internal/order_tree.h"

namespace baro {

// One observed item inside LP_t.
struct LpEntry {
  int64_t time = 1;
  double value = 0.0;
  double weight = 1.0;
  uint64_t tie = 0;    // tie key of the perturbation order
  int64_t window = 0;  // index into LpInstance::window_caps

  PriorityKey key() const { return PriorityKey{value / weight, tie}; }
};

// max sum v x  s.t.  sum w x <= budget,
//                    sum_{window j} w x <= window_caps[j]  for every j,
//                    0 <= x <= 1.
// The windows are disjoint, so with the budget the family is laminar.
struct LpInstance {
  std::vector<LpEntry> entries;
  double budget = 0.0;
  std::vector<double> window_caps;

  // Throws InvalidParameter on a negative budget or cap, an invalid item or
  // an entry whose window has no cap.
  void Validate() const;
};

// LP_t over the prefix items[0..t-1] at times 1..t: windows of length ell,
// every (truncated) window capped at `cap`, global budget `budget`. Entry i
// gets tie key ties[i].
LpInstance MakePrefixInstance(std::span<const Item> items,
                              std::span<const uint64_t> ties, int64_t ell,
                              double budget, double cap);

// Density greedy: entries in priority order, each taking the largest
// fraction that fits its window's remaining cap and the remaining budget.
FractionalSolution SolveGreedy(const LpInstance& inst);

inline constexpr size_t kReferenceEntryLimit = 20;

// Exact optimum by a dense primal simplex (Bland's rule) over the slack
// basis. Independent of the greedy. Throws SizeLimitExceeded above
// kReferenceEntryLimit entries.
FractionalSolution SolveReference(const LpInstance& inst);

// Same LP with per-entry bounds lower[i] <= x_i <= upper[i] in place of the
// unit box. Returns nullopt when the bounds make the LP infeasible.
std::optional<FractionalSolution> SolveReferenceBoxed(
    const LpInstance& inst, std::span<const double> lower,
    std::span<const double> upper);

// Tentative pick: X_t > 1e-12. Full pick: X_t >= 1 - 1e-12.
struct TentativeFlags {
  bool tentative = false;
  bool full_pick = false;

  friend bool operator==(const TentativeFlags&,
                         const TentativeFlags&) = default;
};

inline constexpr double kPositiveTolerance = 1e-12;

TentativeFlags TentativeIndicators(double fraction);
// Flags of entry `index` (the current time is conventionally the last).
TentativeFlags TentativeIndicators(const FractionalSolution& sol,
                                   size_t index);

// Online evaluator of the current item's greedy fraction X^t_t in LP_t.
//
// The greedy uses, before reaching the current item, sum over windows of
// min(cap, weight of better items in the window), capped by the budget.
// Windows other than the current one are closed, so each closed window is
// summarized by per-item effective weights min(w, cap - better weight in
// window) kept in one order tree; the open window keeps raw weights. Each
// step is then O(log t) instead of re-solving LP_t.
class PrefixLp {
 public:
  // `cap` may be +infinity (no window constraints).
  PrefixLp(int64_t ell, double cap);

  // Appends the item at time size() + 1 and returns its fraction in the
  // greedy solution of the LP over all items so far with `budget`.
  double AddAndEvaluate(const Item& item, uint64_t tie, double budget);

  int64_t size() const { return size_; }

 private:
  void CloseWindow();

  int64_t ell_;
  double cap_;
  int64_t size_ = 0;
  internal::OrderTree closed_;
  internal::OrderTree open_;
};

}  // namespace baro

#endif  // BARO_LP_H_
