#ifndef BARO_DIAGNOSTICS_H_
#define BARO_DIAGNOSTICS_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "baro/core.h"
#include "baro/lp.h"
#include "baro/rng.h"
#include "baro/trace.h"

namespace baro {

// Running mean and variance (Welford), mergeable.
class MeanVar {
 public:
  void Add(double x);
  void Merge(const MeanVar& other);
  int64_t count() const { return count_; }
  double mean() const { return mean_; }
  // Sample variance; 0 below two observations.
  double variance() const;

 private:
  int64_t count_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

struct RatioReport {
  double ro_value_mean = 0.0;
  double opt_ro = 0.0;
  double ratio_mean = 0.0;
  // Half-width of the normal-approximation 95% interval of ratio_mean.
  double ratio_ci95 = 0.0;
  int64_t trials = 0;
  // False when opt_ro = 0; the ratio fields are then meaningless (zero).
  bool applicable = true;
};

class RatioAccumulator {
 public:
  void Add(const Trace& trace) { values_.Add(trace.RoValue()); }
  void AddValue(double ro_value) { values_.Add(ro_value); }
  void Merge(const RatioAccumulator& other) { values_.Merge(other.values_); }
  RatioReport Report(double opt_ro) const;

 private:
  MeanVar values_;
};

RatioReport CompetitiveRatio(std::span<const Trace> traces, double opt_ro);

struct RankBucket {
  std::string label;
  double lo = 0.0;
  double hi = 0.0;
  bool hi_closed = false;
  int64_t tentative = 0;
  int64_t count = 0;
  double frequency = 0.0;
  // Supremum of psi over the bucket.
  double bound = 1.0;
  // frequency > bound + 3 sqrt(bound (1 - bound) / count).
  bool flagged = false;
};

struct RankProfile {
  int64_t min_time = 1;
  // Non-empty buckets only: deciles of [0, 1), then [0, 1), [1, 50] and
  // (50, inf).
  std::vector<RankBucket> buckets;
  bool any_flagged() const;
  const RankBucket* Find(const std::string& label) const;
};

// Empirical Pr(T_t = 1 | R_t in bucket) over RO steps t >= 8 ell (gamma + 1).
class RankProfileAccumulator {
 public:
  explicit RankProfileAccumulator(const ModelParams& params);
  void Add(const Trace& trace);
  void Merge(const RankProfileAccumulator& other);
  RankProfile Profile() const;

 private:
  double k_;
  int64_t min_time_;
  std::vector<int64_t> tentative_;
  std::vector<int64_t> count_;
};

// Earliest time covered by the tentative-selection bound: 8 ell (gamma + 1).
int64_t RankProfileStart(const ModelParams& params);

// Blocking-probability shape C / (k (1 - t/n - a5 gamma ln k / k)^2); +inf
// where the bracket is not positive.
double BlockingShape(int64_t t, const ModelParams& params, double numerator,
                     double a5);

struct WindowStats {
  int64_t index = 0;
  Window window;
  double tentative_mean = 0.0;  // mean over trials of sum O'_t in the window
  double tentative_sd = 0.0;
  double tentative_max = 0.0;
  double occupation_max = 0.0;  // max over trials of sum O_t in the window
  double blocked_frequency = 0.0;  // mean over the window's times of Pr(F_t = 0)
  double blocking_shape = 0.0;     // BlockingShape at the window's last time
};

struct OccupationProfile {
  double outer_cap = 0.0;
  int64_t trials = 0;
  std::vector<WindowStats> windows;
  // Pr(blocked at t) for t = 1..n.
  std::vector<double> blocked_by_t;
};

struct OccupationOptions {
  double numerator = 1.0;
  double a5 = 1.0;
};

class OccupationAccumulator {
 public:
  OccupationAccumulator(const ModelParams& params, const AlgoConstants& constants);
  void Add(const Trace& trace);
  void Merge(const OccupationAccumulator& other);
  OccupationProfile Profile(const OccupationOptions& options = {}) const;

 private:
  ModelParams params_;
  AlgoConstants constants_;
  int64_t trials_ = 0;
  std::vector<MeanVar> tentative_;
  std::vector<double> tentative_max_;
  std::vector<double> occupation_max_;
  std::vector<int64_t> blocked_;
};

// T-bar_t = max(T_t, 1[R_t <= 1]) at an RO step.
inline bool RelaxedIndicator(bool tentative, double rank) {
  return tentative || rank <= 1.0;
}

struct RelaxedPoint {
  int64_t t = 0;
  double mean = 0.0;
  double variance = 0.0;
};

struct RelaxedReport {
  std::vector<RelaxedPoint> points;
  // Least-squares slope of log variance against log t over points with
  // positive variance; nullopt with fewer than two such points.
  std::optional<double> slope;
};

// Tracks S_t = sum over RO steps t' <= t of W_t' T-bar_t' at checkpoints.
class RelaxedAccumulator {
 public:
  explicit RelaxedAccumulator(std::vector<int64_t> checkpoints);
  void Add(const Trace& trace);
  void Merge(const RelaxedAccumulator& other);
  RelaxedReport Report() const;
  const std::vector<int64_t>& checkpoints() const { return checkpoints_; }

 private:
  std::vector<int64_t> checkpoints_;
  std::vector<MeanVar> sums_;
};

// `count` geometrically spaced distinct times in [lo, hi].
std::vector<int64_t> GeometricTimes(int64_t lo, int64_t hi, int count);

struct BoundPoint {
  int64_t t = 0;
  double c_t = 0.0;
  double eps_t = 0.0;
  double p_t = 0.0;
};

// eps_t = (a1 + 3) gamma ell / t + sqrt(10 ln k) sqrt(2 n / (t k)).
double EpsilonT(int64_t t, const ModelParams& params, double a1);
// t0 = 1212 gamma ell.
int64_t StartTime(const ModelParams& params);
std::vector<BoundPoint> BoundCurves(const ModelParams& params,
                                    const AlgoConstants& constants,
                                    std::span<const int64_t> times,
                                    const OccupationOptions& options = {});

// Deterministic lemma oracles on a realized prefix. The current item is the
// last of `items`, at time t = items.size().
struct LemmaScenario {
  std::vector<Item> items;
  std::vector<uint64_t> ties;
  int64_t ell = 1;
  // Covered windows (0-based) among the windows of [t].
  std::vector<int64_t> adv_cover;
  int64_t gamma = 0;
  double budget = 0.0;  // c_t t k / n
  double cap = 0.0;     // a1 ell k / n

  int64_t t() const { return static_cast<int64_t>(items.size()); }
  LpInstance Instance() const;
  // True iff entry i is strictly better than the current item.
  bool IsBetter(size_t i) const;
};

enum class OracleOutcome { kPass, kFlag, kFail };
std::string_view OutcomeName(OracleOutcome outcome);

struct SatResult {
  OracleOutcome outcome = OracleOutcome::kPass;
  bool vacuous = true;    // no saturating better-only solution exists
  double fraction = 0.0;  // greedy X_t
};

// If some feasible solution supported on strictly better items saturates
// the budget, the greedy optimum must have X_t = 0. Flags instances where
// another optimum with X_t > 0 exists (equal densities) and instances whose
// X_t is a rounding residue (mass <= 1e-10 max(1, budget)).
SatResult LemmaSatOracle(const LemmaScenario& scenario);

struct LbPickResult {
  // Hypotheses with the current item's own size included:
  //   free better mass + w_t < budget - gamma cap,
  //   better mass in the current window + w_t < cap.
  bool hypotheses_met = false;
  // The same without the w_t terms.
  bool literal_hypotheses_met = false;
  OracleOutcome outcome = OracleOutcome::kPass;  // for hypotheses_met
  bool literal_counterexample = false;  // literal hypotheses met, X_t < 1
  double fraction = 0.0;
};

// Requires the current time to be free. Under the hypotheses the greedy
// optimum must take the current item fully.
LbPickResult LemmaLbPickOracle(const LemmaScenario& scenario);

// Random scenarios with at most `max_t` items. The sat generator picks the
// budget around the better-only saturation level; the lbpick generator keeps
// the current time free and places budget and cap around the hypothesis
// thresholds.
LemmaScenario RandomSatScenario(Rng& rng, int64_t max_t = 12);
LemmaScenario RandomLbPickScenario(Rng& rng, int64_t max_t = 12);

}  // namespace baro

#endif  // BARO_DIAGNOSTICS_H_
