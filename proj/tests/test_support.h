#ifndef BARO_TESTS_TEST_SUPPORT_H_
#define BARO_TESTS_TEST_SUPPORT_H_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <memory>
#include <vector>

#include "baro/adversary.h"
#include "baro/core.h"
#include "baro/lp.h"
#include "baro/rng.h"

namespace baro::testing {

// Values in (0, 10], weights in (0, 1]. With probability 1/4 the density is
// snapped to a small grid so that equal densities actually occur.
inline Item RandomItem(Rng& rng) {
  Item item{10.0 * rng.UniformOpenClosed(), rng.UniformOpenClosed()};
  if (rng.Below(4) == 0) {
    const double density = 1.0 + static_cast<double>(rng.Below(3));
    item.value = density * item.weight;
  }
  return item;
}

inline std::vector<Item> RandomItems(Rng& rng, size_t count) {
  std::vector<Item> items;
  items.reserve(count);
  for (size_t i = 0; i < count; ++i) items.push_back(RandomItem(rng));
  return items;
}

// A random LP_t-shaped instance with 1..max_entries entries: consecutive
// windows of random length, random caps and budget (sometimes slack).
inline LpInstance RandomInstance(Rng& rng, size_t max_entries) {
  const size_t count = 1 + rng.Below(max_entries);
  const auto ell = static_cast<int64_t>(1 + rng.Below(count));
  std::vector<Item> items = RandomItems(rng, count);
  std::vector<uint64_t> ties(count);
  for (size_t i = 0; i < count; ++i) ties[i] = rng.Below(1000);
  std::sort(ties.begin(), ties.end());
  ties.erase(std::unique(ties.begin(), ties.end()), ties.end());
  while (ties.size() < count) ties.push_back(ties.back() + 1);
  for (size_t i = count; i > 1; --i) std::swap(ties[i - 1], ties[rng.Below(i)]);
  const double budget =
      rng.Below(8) == 0 ? 0.0 : rng.Uniform(0.0, static_cast<double>(count));
  const double cap = rng.Uniform(0.05, static_cast<double>(ell) + 0.5);
  LpInstance inst = MakePrefixInstance(items, ties, ell, budget, cap);
  for (double& c : inst.window_caps) {
    if (rng.Below(3) == 0) c = rng.Uniform(0.0, static_cast<double>(ell));
  }
  return inst;
}

// LP value from the dual: for every lambda >= 0 the dual objective after
// optimizing the window multipliers is
//   B lambda + sum_j min_{s >= lambda} [cap_j (s - lambda)
//                                       + sum_{i in j} max(0, v_i - w_i s)],
// piecewise linear with breakpoints at densities, so scanning
// lambda, s over {0} and the densities gives the exact minimum.
inline double DualValue(const LpInstance& inst) {
  std::vector<double> breaks{0.0};
  for (const LpEntry& e : inst.entries) breaks.push_back(e.value / e.weight);
  double best = std::numeric_limits<double>::infinity();
  for (double lambda : breaks) {
    double total = inst.budget * lambda;
    for (size_t j = 0; j < inst.window_caps.size(); ++j) {
      const double cap = inst.window_caps[j];
      double window_best = std::numeric_limits<double>::infinity();
      for (double s : breaks) {
        if (s < lambda) continue;
        if (std::isinf(cap) && s != lambda) continue;
        double term = std::isinf(cap) ? 0.0 : cap * (s - lambda);
        for (const LpEntry& e : inst.entries) {
          if (e.window == static_cast<int64_t>(j)) {
            term += std::max(0.0, e.value - e.weight * s);
          }
        }
        window_best = std::min(window_best, term);
      }
      total += window_best;
    }
    best = std::min(best, total);
  }
  return best;
}

// Fractional knapsack by enumeration: some subset taken fully plus at most
// one extra item taken fractionally.
inline double BruteForceKnapsack(const std::vector<Item>& pool, double k) {
  const size_t n = pool.size();
  double best = 0.0;
  for (uint64_t mask = 0; mask < (uint64_t{1} << n); ++mask) {
    double v = 0.0;
    double w = 0.0;
    for (size_t i = 0; i < n; ++i) {
      if (mask >> i & 1) {
        v += pool[i].value;
        w += pool[i].weight;
      }
    }
    if (w > k + 1e-12) continue;
    best = std::max(best, v);
    for (size_t f = 0; f < n; ++f) {
      if (mask >> f & 1) continue;
      const double x = std::min(1.0, (k - w) / pool[f].weight);
      best = std::max(best, v + x * pool[f].value);
    }
  }
  return best;
}

inline Schedule PureRandomOrder(std::vector<Item> pool, double k,
                                uint64_t seed,
                                std::optional<int64_t> ell = std::nullopt) {
  const auto n = static_cast<int64_t>(pool.size());
  ModelParams params = ModelParams::Create(n, k, 0, {}, ell);
  auto shared = std::make_shared<const RoPool>(std::move(pool), k);
  return BuildSchedule(shared, params, StaticAdversary{}, seed);
}

// Random small BARO schedule: random n, k, ell, gamma and cover; adversarial
// items drawn like the pool.
inline Schedule RandomSchedule(Rng& rng, int64_t max_n) {
  const auto n = static_cast<int64_t>(2 + rng.Below(max_n - 1));
  const double k = rng.Uniform(0.5, static_cast<double>(n) / 2.0 + 1.0);
  const auto ell = static_cast<int64_t>(1 + rng.Below(std::max<int64_t>(1, n / 3)));
  const int64_t windows = (n + ell - 1) / ell;
  const auto gamma = static_cast<int64_t>(rng.Below(windows / 2 + 1));
  std::vector<int64_t> cover;
  for (int64_t w = 0; w < windows && static_cast<int64_t>(cover.size()) < gamma;
       ++w) {
    if (rng.Bernoulli(0.5)) cover.push_back(w);
  }
  ModelParams params = ModelParams::Create(n, k, gamma, cover, ell);
  auto pool = std::make_shared<const RoPool>(
      RandomItems(rng, static_cast<size_t>(params.NumRoTimes())), k);
  StaticAdversary adv;
  for (int64_t t = 1; t <= n; ++t) {
    if (params.IsAdversarialTime(t)) adv.emissions.emplace_back(t, RandomItem(rng));
  }
  return BuildSchedule(pool, params, adv, rng.Next());
}

}  // namespace baro::testing

#endif  // BARO_TESTS_TEST_SUPPORT_H_
