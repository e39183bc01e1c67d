#include "baro/adversary.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "baro/error.h"

namespace baro {

RoPool::RoPool(std::vector<Item> items, double k)
    : items_(std::move(items)), k_(k) {
  for (const Item& item : items_) ValidateItem(item);
  ranks_ = RanksByPoolIndex(items_, k_);
  opt_value_ = OptRo(items_, k_).total_value;
}

Schedule BuildSchedule(std::shared_ptr<const RoPool> pool,
                       const ModelParams& params,
                       const AdversaryStrategy& strategy, uint64_t seed) {
  if (!pool) throw InvalidParameter("schedule needs a pool");
  const int64_t ro_times = params.NumRoTimes();
  if (static_cast<int64_t>(pool->size()) != ro_times) {
    throw InvalidParameter("pool has " + std::to_string(pool->size()) +
                           " items but there are " + std::to_string(ro_times) +
                           " random-order times");
  }
  Schedule s;
  s.params_ = params;
  s.pool_ = pool;
  s.seed_ = seed;
  s.slots_.resize(params.n());

  std::vector<size_t> perm(pool->size());
  std::iota(perm.begin(), perm.end(), size_t{0});
  Rng rng(seed, /*stream=*/1);
  for (size_t i = perm.size(); i > 1; --i) {
    std::swap(perm[i - 1], perm[rng.Below(i)]);
  }

  const uint64_t adv_tie_base = pool->size();
  size_t next = 0;
  for (int64_t t = 1; t <= params.n(); ++t) {
    Slot& slot = s.slots_[t - 1];
    if (params.IsAdversarialTime(t)) {
      slot.label = Label::kAdversarial;
      slot.tie = adv_tie_base + static_cast<uint64_t>(t);
    } else {
      slot.label = Label::kRandomOrder;
      slot.ro_index = perm[next++];
      slot.item = pool->items()[*slot.ro_index];
      slot.tie = *slot.ro_index;
    }
  }

  if (const auto* fixed = std::get_if<StaticAdversary>(&strategy)) {
    for (const auto& [t, item] : fixed->emissions) {
      if (t < 1 || t > params.n() || !params.IsAdversarialTime(t)) {
        throw InvalidParameter("strategy emits at time " + std::to_string(t) +
                               " outside the covered windows");
      }
      ValidateItem(item);
      Slot& slot = s.slots_[t - 1];
      if (slot.item) {
        throw InvalidParameter("strategy emits twice at time " +
                               std::to_string(t));
      }
      slot.item = item;
    }
    for (int64_t t = 1; t <= params.n(); ++t) {
      if (!s.slots_[t - 1].item) {
        throw InvalidParameter("static strategy leaves adversarial time " +
                               std::to_string(t) + " empty");
      }
    }
  } else {
    const auto& adaptive = std::get<AdaptiveAdversary>(strategy);
    if (!adaptive.rule) throw InvalidParameter("adaptive strategy has no rule");
    s.adaptive_ = adaptive;
  }
  return s;
}

Item ResolveAdaptive(const Schedule& schedule, int64_t t,
                     std::span<const StepRecord> history) {
  const AdaptiveAdversary* adaptive = schedule.adaptive();
  if (adaptive == nullptr) {
    throw InvalidParameter("schedule has no adaptive strategy");
  }
  AdaptiveView view;
  view.t = t;
  view.history = history;
  view.realized = adaptive->knowledge == AdversaryKnowledge::kFullSchedule
                      ? &schedule
                      : nullptr;
  const Item item = adaptive->rule(view);
  ValidateItem(item);
  return item;
}

int64_t BurstWindows(const ModelParams& params) {
  return static_cast<int64_t>(
      std::ceil(params.k() / static_cast<double>(params.ell())));
}

namespace {

void RequireFrontBurst(const ModelParams& params) {
  const int64_t needed = BurstWindows(params);
  if (params.k() > static_cast<double>(params.gamma() * params.ell())) {
    throw InvalidParameter(
        "insufficient adversarial coverage: need k <= gamma * ell");
  }
  if (params.adv_cover() != FrontCover(needed)) {
    throw InvalidParameter("burst generators need the first " +
                           std::to_string(needed) +
                           " windows as the adversarial cover");
  }
}

std::vector<int64_t> AdversarialTimes(const ModelParams& params) {
  std::vector<int64_t> times;
  for (int64_t w : params.adv_cover()) {
    const Window win = params.WindowAt(w);
    for (int64_t t = win.first; t <= win.last; ++t) times.push_back(t);
  }
  return times;
}

}  // namespace

GeneratedInstance GenTooMany(const ModelParams& params) {
  RequireFrontBurst(params);
  StaticAdversary adv;
  int64_t j = 0;
  for (int64_t t : AdversarialTimes(params)) {
    const double value = kInfinitesimal * (1.0 + j * kInfinitesimalStep);
    adv.emissions.emplace_back(t, Item{value, 1.0});
    ++j;
  }
  return GeneratedInstance{
      std::vector<Item>(params.NumRoTimes(), Item{1.0, 1.0}), std::move(adv)};
}

GeneratedInstance GenTooFew(const ModelParams& params, double eps) {
  if (!(eps > 0.0)) throw InvalidParameter("eps must be positive");
  RequireFrontBurst(params);
  StaticAdversary adv;
  for (int64_t t : AdversarialTimes(params)) {
    adv.emissions.emplace_back(t, Item{1.0 + eps, 1.0});
  }
  return GeneratedInstance{
      std::vector<Item>(params.NumRoTimes(), Item{1.0, 1.0}), std::move(adv)};
}

GeneratedInstance GenKleinbergKiller(const ModelParams& params, double hi,
                                     double lo_max, Rng& rng) {
  if (!(hi > lo_max && lo_max > 0.0)) {
    throw InvalidParameter("need hi > lo_max > 0");
  }
  RequireFrontBurst(params);
  const auto burst = static_cast<int64_t>(std::ceil(params.k()));
  StaticAdversary adv;
  int64_t j = 0;
  for (int64_t t : AdversarialTimes(params)) {
    adv.emissions.emplace_back(
        t, Item{j < burst ? hi : kInfinitesimal, 1.0});
    ++j;
  }
  std::vector<Item> pool;
  pool.reserve(params.NumRoTimes());
  for (int64_t i = 0; i < params.NumRoTimes(); ++i) {
    pool.push_back(Item{lo_max * rng.UniformOpenClosed(), 1.0});
  }
  return GeneratedInstance{std::move(pool), std::move(adv)};
}

AdaptiveAdversary GenDensityTopper(double eta, AdversaryKnowledge knowledge) {
  AdaptiveAdversary adv;
  adv.knowledge = knowledge;
  adv.rule = [eta](const AdaptiveView& view) {
    double best = 0.0;
    for (const StepRecord& r : view.history) {
      if (r.is_ro) best = std::max(best, r.item.density());
    }
    const double value = best > 0.0 ? (1.0 + eta) * best : eta;
    return Item{value, 1.0};
  };
  return adv;
}

std::vector<Item> UniformPool(size_t size, const PoolSpec& spec, Rng& rng) {
  if (!(spec.value_max > spec.value_min && spec.value_min >= 0.0)) {
    throw InvalidParameter("pool values need 0 <= value_min < value_max");
  }
  if (!(spec.weight_max > spec.weight_min && spec.weight_min >= 0.0 &&
        spec.weight_max <= 1.0)) {
    throw InvalidParameter(
        "pool weights need 0 <= weight_min < weight_max <= 1");
  }
  std::vector<Item> pool;
  pool.reserve(size);
  for (size_t i = 0; i < size; ++i) {
    const double v =
        spec.value_max - (spec.value_max - spec.value_min) * rng.Uniform();
    const double w =
        spec.weight_max - (spec.weight_max - spec.weight_min) * rng.Uniform();
    pool.push_back(Item{v, w});
  }
  return pool;
}

StaticAdversary RandomAdversary(const ModelParams& params, const PoolSpec& spec,
                                Rng& rng) {
  const std::vector<int64_t> times = AdversarialTimes(params);
  const std::vector<Item> items = UniformPool(times.size(), spec, rng);
  StaticAdversary adv;
  for (size_t i = 0; i < times.size(); ++i) {
    adv.emissions.emplace_back(times[i], items[i]);
  }
  return adv;
}

}  // namespace baro
