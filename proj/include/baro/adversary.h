#ifndef BARO_ADVERSARY_H_
#define BARO_ADVERSARY_H_

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "baro/core.h"
#include "baro/rng.h"
#include "baro/trace.h"

namespace baro {

// The random-order items chosen by the adversary, with their weighted ranks
// for knapsack size k. Shared read-only between the schedules of a batch.
class RoPool {
 public:
  RoPool(std::vector<Item> items, double k);

  const std::vector<Item>& items() const { return items_; }
  // Weighted rank of items()[i].
  double rank(size_t i) const { return ranks_[i]; }
  const std::vector<double>& ranks() const { return ranks_; }
  size_t size() const { return items_.size(); }
  double k() const { return k_; }
  // OPT_RO for this pool and k.
  double opt_value() const { return opt_value_; }

 private:
  std::vector<Item> items_;
  std::vector<double> ranks_;
  double k_;
  double opt_value_;
};

enum class Label { kRandomOrder, kAdversarial };

class Schedule;

// What an adaptive adversary may look at when choosing the item for time t.
struct AdaptiveView {
  int64_t t = 0;
  // Algorithm decisions at times 1..t-1.
  std::span<const StepRecord> history;
  // The realized schedule (including the RO order), or null when the
  // strategy runs in history-only mode.
  const Schedule* realized = nullptr;
};

enum class AdversaryKnowledge { kFullSchedule, kHistoryOnly };

// Fixed items for the adversarial times, as (time, item) pairs.
struct StaticAdversary {
  std::vector<std::pair<int64_t, Item>> emissions;
};

// Items chosen online, one call per adversarial time, in time order.
struct AdaptiveAdversary {
  std::function<Item(const AdaptiveView&)> rule;
  AdversaryKnowledge knowledge = AdversaryKnowledge::kFullSchedule;
};

using AdversaryStrategy = std::variant<StaticAdversary, AdaptiveAdversary>;

struct Slot {
  Label label = Label::kRandomOrder;
  // Absent only at adversarial times of an adaptive strategy.
  std::optional<Item> item;
  std::optional<size_t> ro_index;
  uint64_t tie = 0;
};

// A realized BARO arrival sequence.
class Schedule {
 public:
  const ModelParams& params() const { return params_; }
  const RoPool& pool() const { return *pool_; }
  std::shared_ptr<const RoPool> shared_pool() const { return pool_; }
  uint64_t seed() const { return seed_; }
  // Slot of time t (1-based).
  const Slot& at(int64_t t) const { return slots_[t - 1]; }
  const std::vector<Slot>& slots() const { return slots_; }
  int64_t size() const { return static_cast<int64_t>(slots_.size()); }
  // The adaptive rule, or null for static strategies.
  const AdaptiveAdversary* adaptive() const {
    return adaptive_ ? &*adaptive_ : nullptr;
  }

 private:
  friend Schedule BuildSchedule(std::shared_ptr<const RoPool>,
                                const ModelParams&, const AdversaryStrategy&,
                                uint64_t);
  ModelParams params_;
  std::shared_ptr<const RoPool> pool_;
  std::vector<Slot> slots_;
  std::optional<AdaptiveAdversary> adaptive_;
  uint64_t seed_ = 0;
};

// Places a uniformly random permutation of the pool (Fisher-Yates driven by
// `seed`) on the random-order times and the strategy's items on the covered
// windows. Throws InvalidParameter on a pool-size mismatch, on a static
// strategy that emits outside the covered windows or leaves an adversarial
// time empty, and on invalid items.
Schedule BuildSchedule(std::shared_ptr<const RoPool> pool,
                       const ModelParams& params,
                       const AdversaryStrategy& strategy, uint64_t seed);

// Item for an adaptive adversarial time; validates the emitted item.
Item ResolveAdaptive(const Schedule& schedule, int64_t t,
                     std::span<const StepRecord> history);

struct GeneratedInstance {
  std::vector<Item> pool;
  AdversaryStrategy strategy;
};

inline constexpr double kInfinitesimal = 1e-6;
inline constexpr double kInfinitesimalStep = 1e-3;

// Number of leading windows needed to hold k adversarial items.
int64_t BurstWindows(const ModelParams& params);

// Adversarial items of size 1 with tiny increasing values
// delta * (1 + j * 1e-3); RO items all (1, 1). Requires the cover to be the
// first ceil(k / ell) windows and k <= gamma * ell.
GeneratedInstance GenTooMany(const ModelParams& params);

// Adversarial items (1 + eps, 1); RO items all (1, 1). eps > 0.
GeneratedInstance GenTooFew(const ModelParams& params, double eps);

// The first ceil(k) adversarial times carry (hi, 1), the remaining covered
// times carry (delta, 1); RO values uniform in (0, lo_max], size 1.
// Requires hi > lo_max > 0 and the same front cover as GenTooMany.
GeneratedInstance GenKleinbergKiller(const ModelParams& params, double hi,
                                     double lo_max, Rng& rng);

// Adaptive: size 1 and value (1 + eta) times the best RO density observed so
// far (eta when nothing has been observed yet).
AdaptiveAdversary GenDensityTopper(
    double eta = 0.05,
    AdversaryKnowledge knowledge = AdversaryKnowledge::kFullSchedule);

// Pool of i.i.d. items, value uniform in (value_min, value_max] and weight
// uniform in (weight_min, weight_max].
struct PoolSpec {
  double value_min = 0.0;
  double value_max = 1.0;
  double weight_min = 0.0;
  double weight_max = 1.0;
};

std::vector<Item> UniformPool(size_t size, const PoolSpec& spec, Rng& rng);

// Static strategy drawing every adversarial item from `spec`.
StaticAdversary RandomAdversary(const ModelParams& params, const PoolSpec& spec,
                                Rng& rng);

}  // namespace baro

#endif  // BARO_ADVERSARY_H_
