#include "baro/lp.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "baro/error.h"

namespace baro {
namespace {

// Dense simplex for max c.y s.t. A y <= b, y >= 0 with b >= 0, started from
// the all-slack basis. Bland's rule guarantees termination.
std::vector<double> SimplexMax(const std::vector<double>& c,
                               const std::vector<std::vector<double>>& a,
                               const std::vector<double>& b) {
  constexpr double kEps = 1e-12;
  const size_t m = a.size();
  const size_t nv = c.size();
  const size_t cols = nv + m;
  std::vector<std::vector<double>> tab(m, std::vector<double>(cols + 1, 0.0));
  std::vector<size_t> basis(m);
  for (size_t r = 0; r < m; ++r) {
    std::copy(a[r].begin(), a[r].end(), tab[r].begin());
    tab[r][nv + r] = 1.0;
    tab[r][cols] = b[r];
    basis[r] = nv + r;
  }
  std::vector<double> reduced(cols, 0.0);
  std::copy(c.begin(), c.end(), reduced.begin());

  const size_t max_iterations = 50000;
  for (size_t iter = 0; iter < max_iterations; ++iter) {
    size_t enter = cols;
    for (size_t j = 0; j < cols; ++j) {
      if (reduced[j] > kEps) {
        enter = j;
        break;
      }
    }
    if (enter == cols) {
      std::vector<double> y(nv, 0.0);
      for (size_t r = 0; r < m; ++r) {
        if (basis[r] < nv) y[basis[r]] = tab[r][cols];
      }
      return y;
    }
    size_t leave = m;
    double best_ratio = std::numeric_limits<double>::infinity();
    for (size_t r = 0; r < m; ++r) {
      if (tab[r][enter] <= kEps) continue;
      const double ratio = tab[r][cols] / tab[r][enter];
      const bool strictly_smaller = ratio < best_ratio - kEps;
      const bool tie = !strictly_smaller && ratio <= best_ratio + kEps;
      if (leave == m || strictly_smaller ||
          (tie && basis[r] < basis[leave])) {
        best_ratio = std::min(best_ratio, ratio);
        leave = r;
      }
    }
    if (leave == m) throw NumericFailure("reference LP is unbounded");

    std::vector<double>& prow = tab[leave];
    const double pivot = prow[enter];
    for (double& v : prow) v /= pivot;
    for (size_t r = 0; r < m; ++r) {
      if (r == leave) continue;
      const double f = tab[r][enter];
      if (f == 0.0) continue;
      for (size_t j = 0; j <= cols; ++j) tab[r][j] -= f * prow[j];
      tab[r][enter] = 0.0;
    }
    const double f = reduced[enter];
    for (size_t j = 0; j < cols; ++j) reduced[j] -= f * prow[j];
    reduced[enter] = 0.0;
    basis[leave] = enter;
  }
  throw NumericFailure("reference simplex did not terminate");
}

}  // namespace

void LpInstance::Validate() const {
  if (!(budget >= 0.0)) throw InvalidParameter("LP budget must be >= 0");
  for (double cap : window_caps) {
    if (!(cap >= 0.0)) throw InvalidParameter("LP window caps must be >= 0");
  }
  for (const LpEntry& e : entries) {
    ValidateItem(Item{e.value, e.weight});
    if (e.window < 0 || e.window >= static_cast<int64_t>(window_caps.size())) {
      throw InvalidParameter("LP entry at time " + std::to_string(e.time) +
                             " has no window cap");
    }
  }
}

LpInstance MakePrefixInstance(std::span<const Item> items,
                              std::span<const uint64_t> ties, int64_t ell,
                              double budget, double cap) {
  if (ties.size() != items.size()) {
    throw InvalidParameter("one tie key per item is required");
  }
  if (ell < 1) throw InvalidParameter("ell must be positive");
  LpInstance inst;
  inst.budget = budget;
  const int64_t t = static_cast<int64_t>(items.size());
  inst.window_caps.assign((t + ell - 1) / ell, cap);
  inst.entries.reserve(items.size());
  for (int64_t s = 1; s <= t; ++s) {
    const Item& item = items[s - 1];
    inst.entries.push_back(
        LpEntry{s, item.value, item.weight, ties[s - 1], (s - 1) / ell});
  }
  return inst;
}

FractionalSolution SolveGreedy(const LpInstance& inst) {
  const size_t count = inst.entries.size();
  std::vector<size_t> order(count);
  std::iota(order.begin(), order.end(), size_t{0});
  std::sort(order.begin(), order.end(), [&inst](size_t a, size_t b) {
    return Better(inst.entries[a].key(), inst.entries[b].key());
  });

  FractionalSolution sol;
  sol.fractions.assign(count, 0.0);
  std::vector<double> window_left = inst.window_caps;
  double budget_left = std::max(0.0, inst.budget);
  for (size_t i : order) {
    if (budget_left <= 0.0) break;
    const LpEntry& e = inst.entries[i];
    double& win = window_left[e.window];
    if (win <= 0.0) continue;
    const double room = std::min(win, budget_left);
    double x = 1.0;
    if (e.weight >= room) {
      // The binding constraint becomes exactly tight.
      x = room / e.weight;
      if (win <= budget_left) {
        budget_left -= win;
        win = 0.0;
      } else {
        win -= budget_left;
        budget_left = 0.0;
      }
    } else {
      win -= e.weight;
      budget_left -= e.weight;
    }
    sol.fractions[i] = x;
    sol.total_value += e.value * x;
    sol.total_weight += e.weight * x;
  }
  return sol;
}

std::optional<FractionalSolution> SolveReferenceBoxed(
    const LpInstance& inst, std::span<const double> lower,
    std::span<const double> upper) {
  const size_t count = inst.entries.size();
  if (count > kReferenceEntryLimit) {
    throw SizeLimitExceeded("reference LP accepts at most " +
                            std::to_string(kReferenceEntryLimit) +
                            " entries, got " + std::to_string(count));
  }
  if (lower.size() != count || upper.size() != count) {
    throw InvalidParameter("bounds must have one value per entry");
  }
  inst.Validate();
  constexpr double kSlack = 1e-12;

  // Shift x = lower + y so that every right-hand side starts nonnegative.
  std::vector<std::vector<double>> a;
  std::vector<double> b;
  std::vector<double> c(count);
  double budget_rhs = inst.budget;
  std::vector<double> window_rhs = inst.window_caps;
  for (size_t i = 0; i < count; ++i) {
    const LpEntry& e = inst.entries[i];
    if (upper[i] < lower[i] - kSlack) return std::nullopt;
    c[i] = e.value;
    budget_rhs -= e.weight * lower[i];
    window_rhs[e.window] -= e.weight * lower[i];
  }
  auto push_row = [&](std::vector<double> row, double rhs) -> bool {
    if (rhs < -kSlack) return false;
    a.push_back(std::move(row));
    b.push_back(std::max(0.0, rhs));
    return true;
  };
  {
    std::vector<double> row(count);
    for (size_t i = 0; i < count; ++i) row[i] = inst.entries[i].weight;
    if (!push_row(std::move(row), budget_rhs)) return std::nullopt;
  }
  for (size_t j = 0; j < window_rhs.size(); ++j) {
    std::vector<double> row(count, 0.0);
    bool any = false;
    for (size_t i = 0; i < count; ++i) {
      if (inst.entries[i].window == static_cast<int64_t>(j)) {
        row[i] = inst.entries[i].weight;
        any = true;
      }
    }
    if (!any) continue;
    if (!push_row(std::move(row), window_rhs[j])) return std::nullopt;
  }
  for (size_t i = 0; i < count; ++i) {
    std::vector<double> row(count, 0.0);
    row[i] = 1.0;
    if (!push_row(std::move(row), upper[i] - lower[i])) return std::nullopt;
  }

  const std::vector<double> y = SimplexMax(c, a, b);
  FractionalSolution sol;
  sol.fractions.resize(count);
  sol.total_value = 0.0;
  for (size_t i = 0; i < count; ++i) {
    const double x = std::clamp(lower[i] + y[i], lower[i], upper[i]);
    sol.fractions[i] = x;
    sol.total_value += inst.entries[i].value * x;
    sol.total_weight += inst.entries[i].weight * x;
  }
  return sol;
}

FractionalSolution SolveReference(const LpInstance& inst) {
  const std::vector<double> lower(inst.entries.size(), 0.0);
  const std::vector<double> upper(inst.entries.size(), 1.0);
  auto sol = SolveReferenceBoxed(inst, lower, upper);
  // The zero vector is always feasible for the unit box.
  return *sol;
}

TentativeFlags TentativeIndicators(double fraction) {
  return TentativeFlags{fraction > kPositiveTolerance,
                        fraction >= 1.0 - kPositiveTolerance};
}

TentativeFlags TentativeIndicators(const FractionalSolution& sol,
                                   size_t index) {
  return TentativeIndicators(sol.fractions.at(index));
}

PrefixLp::PrefixLp(int64_t ell, double cap) : ell_(ell), cap_(cap) {
  if (ell < 1) throw InvalidParameter("ell must be positive");
  if (!(cap >= 0.0)) throw InvalidParameter("window cap must be >= 0");
}

void PrefixLp::CloseWindow() {
  double used = 0.0;
  open_.ForEachInOrder([&](const PriorityKey& key, double weight) {
    const double effective = std::clamp(cap_ - used, 0.0, weight);
    used += weight;
    if (effective > 0.0) closed_.Insert(key, effective);
  });
  open_.Clear();
}

double PrefixLp::AddAndEvaluate(const Item& item, uint64_t tie,
                                double budget) {
  if (size_ > 0 && size_ % ell_ == 0) CloseWindow();
  ++size_;
  const PriorityKey key{item.density(), tie};
  open_.Insert(key, item.weight);
  const double open_better = open_.SumBetter(key);
  const double used_before =
      closed_.SumBetter(key) + std::min(cap_, open_better);
  const double room = std::min(cap_ - open_better, budget - used_before);
  if (!(room > 0.0)) return 0.0;
  return std::min(1.0, room / item.weight);
}

}  // namespace baro
