#ifndef BARO_EXPERIMENT_H_
#define BARO_EXPERIMENT_H_

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "baro/adversary.h"
#include "baro/core.h"
#include "baro/diagnostics.h"
#include "baro/trace.h"

namespace baro {

enum class Pattern {
  kNone,
  kTooMany,
  kTooFew,
  kKleinbergKiller,
  kDensityTopper,
  kRandom,
};

std::string_view PatternName(Pattern pattern);
// Throws InvalidParameter on an unknown name.
Pattern ParsePattern(std::string_view name);

enum class Placement { kFront, kScattered };

struct AdversaryConfig {
  Pattern pattern = Pattern::kNone;
  Placement placement = Placement::kFront;
  double eps = 0.01;      // too_few
  double hi = 10.0;       // kleinberg_killer
  double lo_max = 1.0;    // kleinberg_killer
  double eta = 0.05;      // density_topper
  AdversaryKnowledge knowledge = AdversaryKnowledge::kFullSchedule;
};

struct ExperimentConfig {
  int64_t n = 1000;
  double k = 10.0;
  std::optional<int64_t> ell;
  int64_t gamma = 0;
  AdversaryConfig adversary;
  // Item distribution of the RO pool (and of the random adversary).
  PoolSpec pool;
  // Seed of the pool draw; defaults to base_seed.
  std::optional<uint64_t> pool_seed;
  std::vector<Algorithm> algorithms{Algorithm::kBaro};
  std::string profile = "practical";  // "paper", "practical" or "custom"
  AlgoConstants constants = AlgoConstants::Practical();
  int64_t trials = 1;
  uint64_t base_seed = 1;
  // Trials whose full trace is written as CSV (the first `trace_trials`).
  int64_t trace_trials = 1;
  OccupationOptions occupation;
  int relaxed_checkpoints = 8;
};

// Grid for `sweep`: the cross product of the non-empty lists replaces the
// corresponding base fields.
struct SweepConfig {
  ExperimentConfig base;
  std::vector<double> k;
  std::vector<int64_t> gamma;
  std::vector<Pattern> pattern;
  std::vector<Algorithm> algorithm;
};

// Configuration problem anchored to a line of the source text (0 when no
// line applies).
class ConfigError : public std::runtime_error {
 public:
  ConfigError(int line, const std::string& message)
      : std::runtime_error(message), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

// Parse JSON configs. Unknown keys, wrong types and invalid values raise
// ConfigError with the line of the offending key.
ExperimentConfig ParseExperimentConfig(std::string_view text);
SweepConfig ParseSweepConfig(std::string_view text);

// Overrides the constants with a named profile ("paper" or "practical").
void ApplyProfile(ExperimentConfig& config, std::string_view profile);

// Builds params and pool and checks the pattern's requirements; throws
// InvalidParameter when they do not hold.
struct PreparedExperiment {
  ModelParams params;
  std::shared_ptr<const RoPool> pool;
  AdversaryStrategy strategy;
};
PreparedExperiment Prepare(const ExperimentConfig& config);

struct TrialRow {
  int64_t trial = 0;
  uint64_t seed = 0;
  Algorithm algorithm = Algorithm::kBaro;
  double ro_value = 0.0;
  double total_value = 0.0;
  double occupation = 0.0;
  int64_t ro_picks = 0;
  int64_t picks = 0;
  bool invariants_ok = true;
};

struct AlgorithmResult {
  Algorithm algorithm = Algorithm::kBaro;
  RatioReport ratio;
  RankProfile rank_profile;
  OccupationProfile occupation;
  RelaxedReport relaxed;
  int64_t invariant_failures = 0;
  std::vector<std::string> invariant_messages;  // first few
  int64_t trials_without_ro_picks = 0;
};

struct ExperimentResult {
  ExperimentConfig config;
  ModelParams params;
  double opt_ro = 0.0;
  int64_t pool_size = 0;
  std::vector<TrialRow> rows;  // trial-major, algorithms in config order
  std::vector<AlgorithmResult> results;
  // Full traces of the first trace_trials trials, trial-major.
  std::vector<Trace> traces;
  std::vector<BoundPoint> bounds;
};

// Runs every trial (seed base_seed + trial) for every algorithm. Trials are
// split into fixed chunks handed to `threads` workers and merged in chunk
// order, so the result does not depend on the thread count.
ExperimentResult RunExperiment(const ExperimentConfig& config, int threads = 1);

struct SweepRow {
  double k = 0.0;
  int64_t gamma = 0;
  Pattern pattern = Pattern::kNone;
  Algorithm algorithm = Algorithm::kBaro;
  RatioReport ratio;
  uint64_t seed = 0;
};

std::vector<SweepRow> RunSweep(const SweepConfig& config, int threads = 1);

// Shortest round-trip decimal form ("inf", "-inf", "nan" for non-finite).
std::string FormatNumber(double x);

// Writers. Column sets are fixed:
//   trace:  t,is_ro,value,weight,rank,tentative,blocked_main,blocked_outer,
//           picked,occupation
//   trials: trial,seed,algorithm,ro_value,total_value,occupation,ro_picks,
//           picks,invariants_ok
//   sweep:  k,gamma,pattern,algorithm,ratio_mean,ratio_ci95,trials,seed
std::string TraceCsv(const Trace& trace);
std::string TrialsCsv(const std::vector<TrialRow>& rows);
std::string SweepCsv(const std::vector<SweepRow>& rows);
// Summary JSON (validated against docs/summary.schema.json).
std::string SummaryJson(const ExperimentResult& result);

}  // namespace baro

#endif  // BARO_EXPERIMENT_H_
