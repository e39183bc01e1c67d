#include "baro/core.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "baro/error.h"

namespace baro {

bool Item::IsValid() const {
  return std::isfinite(value) && value > 0.0 && weight > 0.0 && weight <= 1.0;
}

void ValidateItem(const Item& item) {
  if (!item.IsValid()) {
    std::ostringstream msg;
    msg << "invalid item (value=" << item.value << ", weight=" << item.weight
        << "): need value > 0 and weight in (0, 1]";
    throw InvalidParameter(msg.str());
  }
}

int64_t DefaultWindowSize(int64_t n, double k) {
  if (k <= 1.0) return 1;
  const double raw = std::ceil(static_cast<double>(n) * std::log(k) / k);
  return std::clamp<int64_t>(static_cast<int64_t>(raw), 1, n);
}

ModelParams ModelParams::Create(int64_t n, double k, int64_t gamma,
                                std::vector<int64_t> adv_cover,
                                std::optional<int64_t> ell) {
  if (n < 1) throw InvalidParameter("n must be positive");
  if (!(k > 0.0) || !std::isfinite(k)) {
    throw InvalidParameter("k must be a positive real");
  }
  if (gamma < 0) throw InvalidParameter("gamma must be nonnegative");
  ModelParams p;
  p.n_ = n;
  p.k_ = k;
  p.gamma_ = gamma;
  p.ell_ = ell.has_value() ? *ell : DefaultWindowSize(n, k);
  if (p.ell_ < 1) throw InvalidParameter("ell must be positive");
  std::sort(adv_cover.begin(), adv_cover.end());
  adv_cover.erase(std::unique(adv_cover.begin(), adv_cover.end()),
                  adv_cover.end());
  if (static_cast<int64_t>(adv_cover.size()) > gamma) {
    throw InvalidParameter("adversarial cover has more than gamma windows");
  }
  for (int64_t w : adv_cover) {
    if (w < 0 || w >= p.num_windows()) {
      throw InvalidParameter("adversarial cover names window " +
                             std::to_string(w) + " outside [0, " +
                             std::to_string(p.num_windows()) + ")");
    }
  }
  p.adv_cover_ = std::move(adv_cover);
  return p;
}

Window ModelParams::WindowAt(int64_t index) const {
  const int64_t first = index * ell_ + 1;
  return Window{first, std::min(n_, first + ell_ - 1)};
}

bool ModelParams::IsCoveredWindow(int64_t index) const {
  return std::binary_search(adv_cover_.begin(), adv_cover_.end(), index);
}

int64_t ModelParams::NumRoTimes() const {
  int64_t covered = 0;
  for (int64_t w : adv_cover_) covered += WindowAt(w).size();
  return n_ - covered;
}

std::vector<std::string> ModelParams::RegimeWarnings() const {
  std::vector<std::string> out;
  if (k_ < 80.0) out.push_back("k < 80");
  if (static_cast<double>(n_) < 2.0 * k_) out.push_back("n < 2k");
  if (static_cast<double>(gamma_) < std::sqrt(k_)) {
    out.push_back("gamma < sqrt(k)");
  }
  if (2.0 * static_cast<double>(gamma_ * ell_) > static_cast<double>(n_)) {
    out.push_back("gamma * ell / n > 1/2");
  }
  return out;
}

void ModelParams::RequirePaperRegime() const {
  const auto warnings = RegimeWarnings();
  if (warnings.empty()) return;
  std::string msg = "outside the analysis regime:";
  for (const auto& w : warnings) msg += " [" + w + "]";
  throw InvalidParameter(msg);
}

std::vector<int64_t> FrontCover(int64_t count) {
  std::vector<int64_t> cover(std::max<int64_t>(count, 0));
  std::iota(cover.begin(), cover.end(), 0);
  return cover;
}

std::vector<int64_t> ScatteredCover(int64_t num_windows, int64_t count) {
  if (count > num_windows) {
    throw InvalidParameter("cannot scatter more windows than exist");
  }
  std::vector<int64_t> cover;
  cover.reserve(std::max<int64_t>(count, 0));
  for (int64_t i = 0; i < count; ++i) {
    // Centre of the i-th of `count` equal stretches.
    cover.push_back((2 * i + 1) * num_windows / (2 * count));
  }
  return cover;
}

AlgoConstants AlgoConstants::Paper() {
  constexpr double kA2 = 500.0;
  constexpr double kA3 = 8.0 * kA2;
  return AlgoConstants{601.0, 2.0 * std::exp(6.0) * kA3, true};
}

AlgoConstants AlgoConstants::Practical() {
  return AlgoConstants{3.0, 6.0, true};
}

void AlgoConstants::Validate() const {
  if (!(a1 > 0.0)) throw InvalidParameter("a1 must be positive");
  if (!(a4 >= a1)) throw InvalidParameter("a4 must be at least a1");
}

SortedPool SortPool(const std::vector<Item>& pool) {
  SortedPool out;
  out.order.resize(pool.size());
  std::iota(out.order.begin(), out.order.end(), size_t{0});
  std::stable_sort(out.order.begin(), out.order.end(),
                   [&pool](size_t a, size_t b) {
                     return pool[a].density() > pool[b].density();
                   });
  out.items.reserve(pool.size());
  for (size_t i : out.order) out.items.push_back(pool[i]);
  return out;
}

RankTable WeightedRanks(const std::vector<Item>& sorted_pool, double k) {
  if (!(k > 0.0)) throw InvalidParameter("k must be positive");
  RankTable table;
  table.ranks.reserve(sorted_pool.size());
  double prefix = 0.0;
  for (const Item& item : sorted_pool) {
    table.ranks.push_back(prefix / k);
    prefix += item.weight;
  }
  table.sentinel = prefix / k;
  return table;
}

std::vector<double> RanksByPoolIndex(const std::vector<Item>& pool, double k) {
  const SortedPool sorted = SortPool(pool);
  const RankTable table = WeightedRanks(sorted.items, k);
  std::vector<double> ranks(pool.size());
  for (size_t i = 0; i < sorted.order.size(); ++i) {
    ranks[sorted.order[i]] = table.ranks[i];
  }
  return ranks;
}

double Psi(double gamma, double k) {
  if (gamma < 1.0) return 1.0;
  if (gamma <= 50.0) return 2.0 / k;
  return 4.0 * k * std::exp(-(gamma / 20.0) * std::log(k));
}

double BudgetScale(int64_t t, int64_t gamma, int64_t ell) {
  const double raw = 1.0 - 4.0 * static_cast<double>(gamma) *
                               static_cast<double>(ell) /
                               static_cast<double>(t);
  return std::max(0.0, raw);
}

double BudgetScale(int64_t t, const ModelParams& params) {
  return BudgetScale(t, params.gamma(), params.ell());
}

std::vector<Window> WindowPartition(int64_t n, int64_t ell) {
  if (n < 1 || ell < 1) throw InvalidParameter("n and ell must be positive");
  std::vector<Window> windows;
  windows.reserve((n + ell - 1) / ell);
  for (int64_t first = 1; first <= n; first += ell) {
    windows.push_back(Window{first, std::min(n, first + ell - 1)});
  }
  return windows;
}

std::vector<Window> TruncateWindows(const std::vector<Window>& windows,
                                    int64_t t) {
  std::vector<Window> out;
  for (const Window& w : windows) {
    if (w.first > t) break;
    out.push_back(Window{w.first, std::min(w.last, t)});
  }
  return out;
}

FreeTimes ComputeFreeTimes(const ModelParams& params, int64_t t) {
  FreeTimes out;
  const int64_t end = std::min(t, params.n());
  for (int64_t s = 1; s <= end; ++s) {
    if (!params.IsAdversarialTime(s)) out.times.push_back(s);
  }
  // RO times are exactly the uncovered ones, so both counts agree.
  out.ro_count = static_cast<int64_t>(out.times.size());
  return out;
}

FractionalSolution OptRo(const std::vector<Item>& pool, double k) {
  FractionalSolution sol;
  sol.fractions.assign(pool.size(), 0.0);
  const SortedPool sorted = SortPool(pool);
  double remaining = std::max(0.0, k);
  for (size_t i = 0; i < sorted.items.size() && remaining > 0.0; ++i) {
    const Item& item = sorted.items[i];
    double x = 1.0;
    if (item.weight > remaining) {
      x = remaining / item.weight;
      remaining = 0.0;
    } else {
      remaining -= item.weight;
    }
    sol.fractions[sorted.order[i]] = x;
    sol.total_value += item.value * x;
    sol.total_weight += item.weight * x;
  }
  return sol;
}

}  // namespace baro
