#include "baro/diagnostics.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "baro/error.h"

namespace baro {

void MeanVar::Add(double x) {
  ++count_;
  const double delta = x - mean_;
  mean_ += delta / static_cast<double>(count_);
  m2_ += delta * (x - mean_);
}

void MeanVar::Merge(const MeanVar& other) {
  if (other.count_ == 0) return;
  if (count_ == 0) {
    *this = other;
    return;
  }
  const double total = static_cast<double>(count_ + other.count_);
  const double delta = other.mean_ - mean_;
  mean_ += delta * static_cast<double>(other.count_) / total;
  m2_ += other.m2_ + delta * delta * static_cast<double>(count_) *
                         static_cast<double>(other.count_) / total;
  count_ += other.count_;
}

double MeanVar::variance() const {
  return count_ < 2 ? 0.0 : m2_ / static_cast<double>(count_ - 1);
}

RatioReport RatioAccumulator::Report(double opt_ro) const {
  RatioReport r;
  r.trials = values_.count();
  r.ro_value_mean = values_.mean();
  r.opt_ro = opt_ro;
  if (!(opt_ro > 0.0)) {
    r.applicable = false;
    return r;
  }
  r.ratio_mean = r.ro_value_mean / opt_ro;
  if (r.trials > 0) {
    r.ratio_ci95 = 1.96 * std::sqrt(values_.variance() /
                                    static_cast<double>(r.trials)) /
                   opt_ro;
  }
  return r;
}

RatioReport CompetitiveRatio(std::span<const Trace> traces, double opt_ro) {
  RatioAccumulator acc;
  for (const Trace& trace : traces) acc.Add(trace);
  return acc.Report(opt_ro);
}

// ---------------------------------------------------------------------------
// Rank profile

namespace {

constexpr int kDeciles = 10;
constexpr int kBelowOne = 10;
constexpr int kMiddle = 11;
constexpr int kTail = 12;
constexpr int kBucketCount = 13;

std::string DecileLabel(int d) {
  auto fmt = [](int x) {
    return x == 10 ? std::string("1") : "0." + std::to_string(x);
  };
  return "[" + (d == 0 ? std::string("0") : fmt(d)) + "," + fmt(d + 1) + ")";
}

}  // namespace

bool RankProfile::any_flagged() const {
  return std::any_of(buckets.begin(), buckets.end(),
                     [](const RankBucket& b) { return b.flagged; });
}

const RankBucket* RankProfile::Find(const std::string& label) const {
  for (const RankBucket& b : buckets) {
    if (b.label == label) return &b;
  }
  return nullptr;
}

int64_t RankProfileStart(const ModelParams& params) {
  return 8 * params.ell() * (params.gamma() + 1);
}

RankProfileAccumulator::RankProfileAccumulator(const ModelParams& params)
    : k_(params.k()),
      min_time_(RankProfileStart(params)),
      tentative_(kBucketCount, 0),
      count_(kBucketCount, 0) {}

void RankProfileAccumulator::Add(const Trace& trace) {
  for (const StepRecord& r : trace.records) {
    if (r.time < min_time_ || !r.is_ro || !r.rank) continue;
    const double rank = *r.rank;
    const int t = r.tentative ? 1 : 0;
    if (rank < 1.0) {
      const int d = std::min(kDeciles - 1, static_cast<int>(rank * kDeciles));
      tentative_[d] += t;
      ++count_[d];
      tentative_[kBelowOne] += t;
      ++count_[kBelowOne];
    } else {
      const int b = rank <= 50.0 ? kMiddle : kTail;
      tentative_[b] += t;
      ++count_[b];
    }
  }
}

void RankProfileAccumulator::Merge(const RankProfileAccumulator& other) {
  for (int b = 0; b < kBucketCount; ++b) {
    tentative_[b] += other.tentative_[b];
    count_[b] += other.count_[b];
  }
}

RankProfile RankProfileAccumulator::Profile() const {
  RankProfile profile;
  profile.min_time = min_time_;
  const double inf = std::numeric_limits<double>::infinity();
  for (int b = 0; b < kBucketCount; ++b) {
    if (count_[b] == 0) continue;
    RankBucket bucket;
    if (b < kDeciles) {
      bucket.label = DecileLabel(b);
      bucket.lo = b / 10.0;
      bucket.hi = (b + 1) / 10.0;
      bucket.bound = 1.0;
    } else if (b == kBelowOne) {
      bucket.label = "[0,1)";
      bucket.lo = 0.0;
      bucket.hi = 1.0;
      bucket.bound = 1.0;
    } else if (b == kMiddle) {
      bucket.label = "[1,50]";
      bucket.lo = 1.0;
      bucket.hi = 50.0;
      bucket.hi_closed = true;
      bucket.bound = Psi(1.0, k_);
    } else {
      bucket.label = "(50,inf)";
      bucket.lo = 50.0;
      bucket.hi = inf;
      // Limit of psi as gamma decreases to 50.
      bucket.bound = 4.0 * std::pow(k_, -1.5);
    }
    bucket.tentative = tentative_[b];
    bucket.count = count_[b];
    bucket.frequency =
        static_cast<double>(bucket.tentative) / static_cast<double>(bucket.count);
    const double p = std::min(1.0, bucket.bound);
    const double slack =
        3.0 * std::sqrt(p * (1.0 - p) / static_cast<double>(bucket.count));
    bucket.flagged = p < 1.0 && bucket.frequency > p + slack;
    profile.buckets.push_back(bucket);
  }
  return profile;
}

// ---------------------------------------------------------------------------
// Occupation and blocking

double BlockingShape(int64_t t, const ModelParams& params, double numerator,
                     double a5) {
  const double k = params.k();
  const double bracket = 1.0 - static_cast<double>(t) / params.n() -
                         a5 * params.gamma() * std::log(k) / k;
  if (!(bracket > 0.0)) return std::numeric_limits<double>::infinity();
  return numerator / (k * bracket * bracket);
}

OccupationAccumulator::OccupationAccumulator(const ModelParams& params,
                                             const AlgoConstants& constants)
    : params_(params),
      constants_(constants),
      tentative_(params.num_windows()),
      tentative_max_(params.num_windows(), 0.0),
      occupation_max_(params.num_windows(), 0.0),
      blocked_(params.n(), 0) {}

void OccupationAccumulator::Add(const Trace& trace) {
  if (!(trace.params == params_)) {
    throw InvalidParameter("trace parameters differ from the accumulator's");
  }
  const int64_t windows = params_.num_windows();
  std::vector<double> tentative(windows, 0.0);
  std::vector<double> occupation(windows, 0.0);
  for (const StepRecord& r : trace.records) {
    const int64_t w = params_.WindowOf(r.time);
    tentative[w] += r.tentative_occupation;
    occupation[w] += r.occupation;
    if (r.blocked()) ++blocked_[r.time - 1];
  }
  for (int64_t w = 0; w < windows; ++w) {
    tentative_[w].Add(tentative[w]);
    tentative_max_[w] = std::max(tentative_max_[w], tentative[w]);
    occupation_max_[w] = std::max(occupation_max_[w], occupation[w]);
  }
  ++trials_;
}

void OccupationAccumulator::Merge(const OccupationAccumulator& other) {
  for (size_t w = 0; w < tentative_.size(); ++w) {
    tentative_[w].Merge(other.tentative_[w]);
    tentative_max_[w] = std::max(tentative_max_[w], other.tentative_max_[w]);
    occupation_max_[w] = std::max(occupation_max_[w], other.occupation_max_[w]);
  }
  for (size_t t = 0; t < blocked_.size(); ++t) blocked_[t] += other.blocked_[t];
  trials_ += other.trials_;
}

OccupationProfile OccupationAccumulator::Profile(
    const OccupationOptions& options) const {
  OccupationProfile profile;
  profile.outer_cap = params_.OuterCap(constants_.a4);
  profile.trials = trials_;
  const double trials = std::max<double>(1.0, static_cast<double>(trials_));
  profile.blocked_by_t.reserve(blocked_.size());
  for (int64_t b : blocked_) {
    profile.blocked_by_t.push_back(static_cast<double>(b) / trials);
  }
  for (int64_t w = 0; w < params_.num_windows(); ++w) {
    WindowStats s;
    s.index = w;
    s.window = params_.WindowAt(w);
    s.tentative_mean = tentative_[w].mean();
    s.tentative_sd = std::sqrt(tentative_[w].variance());
    s.tentative_max = tentative_max_[w];
    s.occupation_max = occupation_max_[w];
    double sum = 0.0;
    for (int64_t t = s.window.first; t <= s.window.last; ++t) {
      sum += profile.blocked_by_t[t - 1];
    }
    s.blocked_frequency = sum / static_cast<double>(s.window.size());
    s.blocking_shape =
        BlockingShape(s.window.last, params_, options.numerator, options.a5);
    profile.windows.push_back(s);
  }
  return profile;
}

// ---------------------------------------------------------------------------
// Relaxed tentative indicator

std::vector<int64_t> GeometricTimes(int64_t lo, int64_t hi, int count) {
  if (lo < 1 || hi < lo || count < 1) {
    throw InvalidParameter("need 1 <= lo <= hi and count >= 1");
  }
  std::vector<int64_t> times;
  for (int i = 0; i < count; ++i) {
    const double f = count == 1 ? 0.0 : static_cast<double>(i) / (count - 1);
    const double x = std::exp(std::log(static_cast<double>(lo)) * (1.0 - f) +
                              std::log(static_cast<double>(hi)) * f);
    times.push_back(std::clamp<int64_t>(std::llround(x), lo, hi));
  }
  times.erase(std::unique(times.begin(), times.end()), times.end());
  return times;
}

RelaxedAccumulator::RelaxedAccumulator(std::vector<int64_t> checkpoints)
    : checkpoints_(std::move(checkpoints)), sums_(checkpoints_.size()) {
  if (!std::is_sorted(checkpoints_.begin(), checkpoints_.end())) {
    throw InvalidParameter("checkpoints must be sorted");
  }
}

void RelaxedAccumulator::Add(const Trace& trace) {
  double sum = 0.0;
  size_t next = 0;
  for (const StepRecord& r : trace.records) {
    if (next == checkpoints_.size()) break;
    if (r.is_ro && r.rank && RelaxedIndicator(r.tentative, *r.rank)) {
      sum += r.item.weight;
    }
    while (next < checkpoints_.size() && checkpoints_[next] == r.time) {
      sums_[next++].Add(sum);
    }
  }
}

void RelaxedAccumulator::Merge(const RelaxedAccumulator& other) {
  for (size_t i = 0; i < sums_.size(); ++i) sums_[i].Merge(other.sums_[i]);
}

RelaxedReport RelaxedAccumulator::Report() const {
  RelaxedReport report;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int m = 0;
  for (size_t i = 0; i < checkpoints_.size(); ++i) {
    RelaxedPoint p{checkpoints_[i], sums_[i].mean(), sums_[i].variance()};
    report.points.push_back(p);
    if (p.variance > 0.0) {
      const double x = std::log(static_cast<double>(p.t));
      const double y = std::log(p.variance);
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
      ++m;
    }
  }
  const double denom = m * sxx - sx * sx;
  if (m >= 2 && denom > 0.0) report.slope = (m * sxy - sx * sy) / denom;
  return report;
}

// ---------------------------------------------------------------------------
// Bound curves

double EpsilonT(int64_t t, const ModelParams& params, double a1) {
  const double k = params.k();
  const double td = static_cast<double>(t);
  return (a1 + 3.0) * params.gamma() * params.ell() / td +
         std::sqrt(10.0 * std::log(k)) *
             std::sqrt(2.0 * params.n() / (td * k));
}

int64_t StartTime(const ModelParams& params) {
  return 1212 * params.gamma() * params.ell();
}

std::vector<BoundPoint> BoundCurves(const ModelParams& params,
                                    const AlgoConstants& constants,
                                    std::span<const int64_t> times,
                                    const OccupationOptions& options) {
  std::vector<BoundPoint> points;
  points.reserve(times.size());
  for (int64_t t : times) {
    if (t < 1 || t > params.n()) {
      throw InvalidParameter("bound curve time out of range");
    }
    points.push_back(BoundPoint{
        t, BudgetScale(t, params), EpsilonT(t, params, constants.a1),
        BlockingShape(t, params, options.numerator, options.a5)});
  }
  return points;
}

// ---------------------------------------------------------------------------
// Lemma oracles

LpInstance LemmaScenario::Instance() const {
  return MakePrefixInstance(items, ties, ell, budget, cap);
}

bool LemmaScenario::IsBetter(size_t i) const {
  const size_t cur = items.size() - 1;
  return Better(PriorityKey{items[i].density(), ties[i]},
                PriorityKey{items[cur].density(), ties[cur]});
}

std::string_view OutcomeName(OracleOutcome outcome) {
  switch (outcome) {
    case OracleOutcome::kPass:
      return "pass";
    case OracleOutcome::kFlag:
      return "flag";
    case OracleOutcome::kFail:
      return "fail";
  }
  return "unknown";
}

namespace {

// Does an optimum with X_t >= delta exist?
bool AlternativeOptimumTakesCurrent(const LpInstance& inst, double optimum) {
  if (inst.entries.size() > kReferenceEntryLimit) return false;
  const size_t cur = inst.entries.size() - 1;
  std::vector<double> lower(inst.entries.size(), 0.0);
  std::vector<double> upper(inst.entries.size(), 1.0);
  lower[cur] = 1e-3;
  const auto sol = SolveReferenceBoxed(inst, lower, upper);
  if (!sol) return false;
  return sol->total_value >= optimum - 1e-9 * std::max(1.0, optimum);
}

}  // namespace

SatResult LemmaSatOracle(const LemmaScenario& scenario) {
  if (scenario.items.empty()) throw InvalidParameter("empty scenario");
  const LpInstance inst = scenario.Instance();
  const size_t cur = inst.entries.size() - 1;

  LpInstance better = inst;
  better.entries.clear();
  for (size_t i = 0; i < cur; ++i) {
    if (scenario.IsBetter(i)) better.entries.push_back(inst.entries[i]);
  }
  const double reach = SolveGreedy(better).total_weight;
  const FractionalSolution sol = SolveGreedy(inst);

  SatResult result;
  result.fraction = sol.fractions[cur];
  result.vacuous =
      reach < inst.budget - 1e-13 * std::max(1.0, inst.budget);
  if (result.vacuous) return result;
  // Mass below the rounding level of the budget sums is a residue of
  // summation order, not a counterexample.
  const double mass = result.fraction * inst.entries[cur].weight;
  if (mass > 1e-10 * std::max(1.0, inst.budget)) {
    result.outcome = OracleOutcome::kFail;
  } else if (TentativeIndicators(result.fraction).tentative) {
    result.outcome = OracleOutcome::kFlag;
  } else if (AlternativeOptimumTakesCurrent(inst, sol.total_value)) {
    result.outcome = OracleOutcome::kFlag;
  }
  return result;
}

LbPickResult LemmaLbPickOracle(const LemmaScenario& scenario) {
  if (scenario.items.empty()) throw InvalidParameter("empty scenario");
  const int64_t t = scenario.t();
  const int64_t current_window = (t - 1) / scenario.ell;
  auto covered = [&scenario](int64_t w) {
    return std::find(scenario.adv_cover.begin(), scenario.adv_cover.end(), w) !=
           scenario.adv_cover.end();
  };
  if (covered(current_window)) {
    throw InvalidParameter("the current time must be free");
  }
  if (static_cast<int64_t>(scenario.adv_cover.size()) > scenario.gamma) {
    throw InvalidParameter("cover larger than gamma");
  }
  double free_better = 0.0;
  double window_better = 0.0;
  for (int64_t i = 0; i + 1 < t; ++i) {
    if (!scenario.IsBetter(i)) continue;
    const int64_t w = i / scenario.ell;
    if (!covered(w)) free_better += scenario.items[i].weight;
    if (w == current_window) window_better += scenario.items[i].weight;
  }
  const double w_t = scenario.items.back().weight;
  const double room = scenario.budget - scenario.gamma * scenario.cap;

  LbPickResult result;
  result.literal_hypotheses_met =
      free_better < room && window_better < scenario.cap;
  result.hypotheses_met =
      free_better + w_t < room && window_better + w_t < scenario.cap;
  const FractionalSolution sol = SolveGreedy(scenario.Instance());
  result.fraction = sol.fractions.back();
  const bool full = TentativeIndicators(result.fraction).full_pick;
  if (result.hypotheses_met && !full) result.outcome = OracleOutcome::kFail;
  result.literal_counterexample = result.literal_hypotheses_met && !full;
  return result;
}

namespace {

Item ScenarioItem(Rng& rng) {
  Item item{10.0 * rng.UniformOpenClosed(), rng.UniformOpenClosed()};
  if (rng.Below(3) == 0) {
    item.value = (1.0 + static_cast<double>(rng.Below(3))) * item.weight;
  }
  return item;
}

LemmaScenario RandomPrefix(Rng& rng, int64_t max_t) {
  LemmaScenario s;
  const auto t = static_cast<int64_t>(1 + rng.Below(max_t));
  for (int64_t i = 0; i < t; ++i) s.items.push_back(ScenarioItem(rng));
  s.ties.resize(t);
  for (int64_t i = 0; i < t; ++i) s.ties[i] = static_cast<uint64_t>(i);
  for (int64_t i = t; i > 1; --i) std::swap(s.ties[i - 1], s.ties[rng.Below(i)]);
  s.ell = static_cast<int64_t>(1 + rng.Below(t));
  return s;
}

}  // namespace

LemmaScenario RandomSatScenario(Rng& rng, int64_t max_t) {
  LemmaScenario s = RandomPrefix(rng, max_t);
  const int64_t windows = (s.t() + s.ell - 1) / s.ell;
  for (int64_t w = 0; w < windows; ++w) {
    if (rng.Below(3) == 0) s.adv_cover.push_back(w);
  }
  s.gamma = static_cast<int64_t>(s.adv_cover.size() + rng.Below(2));
  s.cap = rng.Uniform(0.05, static_cast<double>(s.ell) + 0.5);
  std::vector<double> room(windows, s.cap);
  double reach = 0.0;
  for (int64_t i = 0; i + 1 < s.t(); ++i) {
    if (!s.IsBetter(i)) continue;
    const double take = std::min(s.items[i].weight, room[i / s.ell]);
    room[i / s.ell] -= take;
    reach += take;
  }
  switch (rng.Below(4)) {
    case 0:
    case 1:
      s.budget = reach * rng.Uniform();
      break;
    case 2:
      s.budget = reach;
      break;
    default:
      s.budget = rng.Uniform(0.0, static_cast<double>(s.t()));
  }
  return s;
}

LemmaScenario RandomLbPickScenario(Rng& rng, int64_t max_t) {
  LemmaScenario s = RandomPrefix(rng, max_t);
  const int64_t windows = (s.t() + s.ell - 1) / s.ell;
  const int64_t current_window = (s.t() - 1) / s.ell;
  for (int64_t w = 0; w < windows; ++w) {
    if (w != current_window && rng.Below(3) == 0) s.adv_cover.push_back(w);
  }
  s.gamma = static_cast<int64_t>(s.adv_cover.size() + rng.Below(2));
  double free_better = 0.0;
  double window_better = 0.0;
  for (int64_t i = 0; i + 1 < s.t(); ++i) {
    if (!s.IsBetter(i)) continue;
    const int64_t w = i / s.ell;
    if (std::find(s.adv_cover.begin(), s.adv_cover.end(), w) ==
        s.adv_cover.end()) {
      free_better += s.items[i].weight;
    }
    if (w == current_window) window_better += s.items[i].weight;
  }
  const double w_t = s.items.back().weight;
  // Margins in (0, 2 w_t]: below w_t only the literal hypotheses can hold.
  s.cap = window_better + 2.0 * w_t * rng.UniformOpenClosed();
  s.budget = s.gamma * s.cap + free_better + 2.0 * w_t * rng.UniformOpenClosed();
  if (rng.Below(4) == 0) s.budget = rng.Uniform(0.0, static_cast<double>(s.t()));
  return s;
}

}  // namespace baro
