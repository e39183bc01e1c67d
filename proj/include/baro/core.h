#ifndef BARO_CORE_H_
#define BARO_CORE_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace baro {

// A value/size pair. Sizes are normalized so that weight lies in (0, 1].
struct Item {
  double value = 0.0;
  double weight = 1.0;

  double density() const { return value / weight; }
  bool IsValid() const;

  friend bool operator==(const Item&, const Item&) = default;
};

// Throws InvalidParameter unless value > 0 and weight in (0, 1].
void ValidateItem(const Item& item);

// Strict total order used everywhere an ordering by "better" is needed:
// higher density first, equal densities resolved by the smaller tie key.
// This stands in for an infinitesimal perturbation of the values.
struct PriorityKey {
  double density = 0.0;
  uint64_t tie = 0;

  friend bool operator==(const PriorityKey&, const PriorityKey&) = default;
};

// True iff `a` is better than `b`.
inline bool Better(const PriorityKey& a, const PriorityKey& b) {
  if (a.density != b.density) return a.density > b.density;
  return a.tie < b.tie;
}

// A window of consecutive time steps [first, last], 1-based and inclusive.
struct Window {
  int64_t first = 1;
  int64_t last = 0;

  int64_t size() const { return last - first + 1; }
  bool Contains(int64_t t) const { return first <= t && t <= last; }

  friend bool operator==(const Window&, const Window&) = default;
};

// BARO model configuration: horizon n, knapsack size k, window length ell,
// number of adversarial windows gamma and the window indices (0-based) that
// cover the adversarial times.
class ModelParams {
 public:
  // Validates the hard invariants and fills ell with DefaultWindowSize when
  // `ell` is absent. Throws InvalidParameter.
  static ModelParams Create(int64_t n, double k, int64_t gamma,
                            std::vector<int64_t> adv_cover = {},
                            std::optional<int64_t> ell = std::nullopt);

  int64_t n() const { return n_; }
  double k() const { return k_; }
  int64_t ell() const { return ell_; }
  int64_t gamma() const { return gamma_; }
  const std::vector<int64_t>& adv_cover() const { return adv_cover_; }

  int64_t num_windows() const { return (n_ + ell_ - 1) / ell_; }
  // 0-based index of the window holding time t (1-based).
  int64_t WindowOf(int64_t t) const { return (t - 1) / ell_; }
  Window WindowAt(int64_t index) const;
  bool IsCoveredWindow(int64_t index) const;
  bool IsAdversarialTime(int64_t t) const {
    return IsCoveredWindow(WindowOf(t));
  }
  // |RO|: number of times outside the covered windows.
  int64_t NumRoTimes() const;

  // Inner window cap a1 * (ell / n) * k.
  double InnerCap(double a1) const { return a1 * ell_ * k_ / n_; }
  // Outer window cap a4 * (ell / n) * k.
  double OuterCap(double a4) const { return a4 * ell_ * k_ / n_; }

  // Assumptions of the analysis regime that are not hard invariants:
  // k >= 80, n >= 2k, gamma >= sqrt(k), gamma * ell / n <= 1/2.
  std::vector<std::string> RegimeWarnings() const;
  // Throws InvalidParameter listing every regime warning, if any.
  void RequirePaperRegime() const;

  friend bool operator==(const ModelParams&, const ModelParams&) = default;

 private:
  int64_t n_ = 1;
  double k_ = 1.0;
  int64_t ell_ = 1;
  int64_t gamma_ = 0;
  std::vector<int64_t> adv_cover_;
};

// ceil(n ln k / k), clamped to [1, n].
int64_t DefaultWindowSize(int64_t n, double k);

// The first `count` windows.
std::vector<int64_t> FrontCover(int64_t count);
// `count` windows spread evenly over the `num_windows` windows.
std::vector<int64_t> ScatteredCover(int64_t num_windows, int64_t count);

// Tunable profile of the online algorithm.
struct AlgoConstants {
  double a1 = 3.0;  // inner window cap multiplier (inside the LP)
  double a4 = 6.0;  // outer window cap multiplier (blocking rule)
  bool scale_budget = true;  // apply c_t; otherwise c_t = 1

  // a1 = 601, a4 = 2 e^6 a3 with a3 = 8 a2 and a2 = 500.
  static AlgoConstants Paper();
  // a1 = 3, a4 = 6. Binding at desk scale.
  static AlgoConstants Practical();
  // Throws InvalidParameter unless a1 > 0 and a4 >= a1.
  void Validate() const;

  friend bool operator==(const AlgoConstants&, const AlgoConstants&) = default;
};

// Density-sorted pool together with the permutation that produced it:
// items[i] == pool[order[i]].
struct SortedPool {
  std::vector<Item> items;
  std::vector<size_t> order;
};

// Sorts by strictly decreasing density; equal densities keep pool order.
SortedPool SortPool(const std::vector<Item>& pool);

// Weighted ranks r_i = (1/k) * sum_{i' < i} w_{i'} of a density-sorted pool,
// plus the sentinel (1/k) * sum_i w_i.
struct RankTable {
  std::vector<double> ranks;
  double sentinel = 0.0;
};

RankTable WeightedRanks(const std::vector<Item>& sorted_pool, double k);

// Weighted rank of every pool item, indexed by original pool position.
std::vector<double> RanksByPoolIndex(const std::vector<Item>& pool, double k);

// Upper bound on the tentative-selection probability of an item of weighted
// rank gamma: 1 below 1, 2/k on [1, 50], 4k exp(-(gamma/20) ln k) above 50.
double Psi(double gamma, double k);

// c_t = max(0, 1 - 4 gamma ell / t).
double BudgetScale(int64_t t, int64_t gamma, int64_t ell);
double BudgetScale(int64_t t, const ModelParams& params);

// Partition of [n] into consecutive windows of length ell (last may be
// shorter).
std::vector<Window> WindowPartition(int64_t n, int64_t ell);
// The windows restricted to the prefix [t]; windows past t are dropped and
// the window holding t is clipped.
std::vector<Window> TruncateWindows(const std::vector<Window>& windows,
                                    int64_t t);

// Free times in [t] (outside every covered window) and RO_t = |RO ∩ [t]|.
struct FreeTimes {
  std::vector<int64_t> times;
  int64_t ro_count = 0;

  int64_t size() const { return static_cast<int64_t>(times.size()); }
};

FreeTimes ComputeFreeTimes(const ModelParams& params, int64_t t);

// A fractional assignment over entries (pool items or LP entries).
struct FractionalSolution {
  std::vector<double> fractions;
  double total_value = 0.0;
  double total_weight = 0.0;
};

// Optimal fractional knapsack over `pool` with capacity k (greedy by
// density). Fractions are indexed by pool position.
FractionalSolution OptRo(const std::vector<Item>& pool, double k);

}  // namespace baro

#endif  // BARO_CORE_H_
