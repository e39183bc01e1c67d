#include "baro/experiment.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <exception>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <thread>

#include "baro/algo.h"
#include "baro/error.h"
#include "json.hpp"

namespace baro {

using nlohmann::json;

std::string_view PatternName(Pattern pattern) {
  switch (pattern) {
    case Pattern::kNone:
      return "none";
    case Pattern::kTooMany:
      return "too_many";
    case Pattern::kTooFew:
      return "too_few";
    case Pattern::kKleinbergKiller:
      return "kleinberg_killer";
    case Pattern::kDensityTopper:
      return "density_topper";
    case Pattern::kRandom:
      return "random";
  }
  return "unknown";
}

Pattern ParsePattern(std::string_view name) {
  for (Pattern p : {Pattern::kNone, Pattern::kTooMany, Pattern::kTooFew,
                    Pattern::kKleinbergKiller, Pattern::kDensityTopper,
                    Pattern::kRandom}) {
    if (PatternName(p) == name) return p;
  }
  throw InvalidParameter("unknown pattern: " + std::string(name));
}

// ---------------------------------------------------------------------------
// Config parsing

namespace {

// Line of the first occurrence of every object key in the source text.
std::map<std::string, int> KeyLines(std::string_view text) {
  std::map<std::string, int> lines;
  int line = 1;
  for (size_t i = 0; i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      continue;
    }
    if (text[i] != '"') continue;
    std::string token;
    size_t j = i + 1;
    for (; j < text.size() && text[j] != '"'; ++j) {
      if (text[j] == '\\' && j + 1 < text.size()) ++j;
      token.push_back(text[j]);
    }
    size_t k = j + 1;
    while (k < text.size() && (text[k] == ' ' || text[k] == '\t' ||
                               text[k] == '\r' || text[k] == '\n')) {
      ++k;
    }
    if (k < text.size() && text[k] == ':') lines.emplace(token, line);
    i = j;
  }
  return lines;
}

int LineOfByte(std::string_view text, size_t byte) {
  byte = std::min(byte, text.size());
  return 1 + static_cast<int>(std::count(text.begin(), text.begin() + byte, '\n'));
}

class Reader {
 public:
  explicit Reader(std::string_view text) : lines_(KeyLines(text)) {
    try {
      root_ = json::parse(text);
    } catch (const json::parse_error& e) {
      throw ConfigError(LineOfByte(text, e.byte > 0 ? e.byte - 1 : 0),
                        "malformed JSON");
    }
    if (!root_.is_object()) throw ConfigError(1, "config must be a JSON object");
  }

  const json& root() const { return root_; }

  int Line(const std::string& key) const {
    auto it = lines_.find(key);
    return it == lines_.end() ? 0 : it->second;
  }

  [[noreturn]] void Fail(const std::string& key, const std::string& msg) const {
    throw ConfigError(Line(key), "\"" + key + "\": " + msg);
  }

  void AllowOnly(const json& obj, std::initializer_list<std::string_view> keys,
                 const std::string& where) const {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
      if (std::find(keys.begin(), keys.end(), it.key()) == keys.end()) {
        Fail(it.key(), "unknown key in " + where);
      }
    }
  }

  const json* Get(const json& obj, const std::string& key) const {
    auto it = obj.find(key);
    return it == obj.end() ? nullptr : &*it;
  }

  double Number(const json& v, const std::string& key) const {
    if (!v.is_number()) Fail(key, "expected a number");
    return v.get<double>();
  }

  int64_t Integer(const json& v, const std::string& key) const {
    if (v.is_number_integer()) return v.get<int64_t>();
    if (v.is_number_float()) {
      const double d = v.get<double>();
      if (std::isfinite(d) && d == std::floor(d) && std::abs(d) < 9e15) {
        return static_cast<int64_t>(d);
      }
    }
    Fail(key, "expected an integer");
  }

  uint64_t Unsigned(const json& v, const std::string& key) const {
    if (v.is_number_unsigned()) return v.get<uint64_t>();
    const int64_t x = Integer(v, key);
    if (x < 0) Fail(key, "expected a nonnegative integer");
    return static_cast<uint64_t>(x);
  }

  std::string String(const json& v, const std::string& key) const {
    if (!v.is_string()) Fail(key, "expected a string");
    return v.get<std::string>();
  }

  bool Bool(const json& v, const std::string& key) const {
    if (!v.is_boolean()) Fail(key, "expected true or false");
    return v.get<bool>();
  }

  const json& Array(const json& v, const std::string& key) const {
    if (!v.is_array()) Fail(key, "expected an array");
    return v;
  }

  const json& Object(const json& v, const std::string& key) const {
    if (!v.is_object()) Fail(key, "expected an object");
    return v;
  }

 private:
  std::map<std::string, int> lines_;
  json root_;
};

Algorithm ReadAlgorithm(const Reader& r, const json& v, const std::string& key) {
  try {
    return ParseAlgorithm(r.String(v, key));
  } catch (const InvalidParameter&) {
    r.Fail(key, "unknown algorithm (expected baro, primal or topk)");
  }
}

Pattern ReadPattern(const Reader& r, const json& v, const std::string& key) {
  try {
    return ParsePattern(r.String(v, key));
  } catch (const InvalidParameter&) {
    r.Fail(key,
           "unknown pattern (expected none, too_many, too_few, "
           "kleinberg_killer, density_topper or random)");
  }
}

void ReadAdversary(const Reader& r, const json& obj, AdversaryConfig& adv) {
  r.AllowOnly(obj, {"pattern", "placement", "eps", "hi", "lo_max", "eta",
                    "knowledge"},
              "adversary");
  if (const json* v = r.Get(obj, "pattern")) {
    adv.pattern = ReadPattern(r, *v, "pattern");
  }
  if (const json* v = r.Get(obj, "placement")) {
    const std::string s = r.String(*v, "placement");
    if (s == "front") {
      adv.placement = Placement::kFront;
    } else if (s == "scattered") {
      adv.placement = Placement::kScattered;
    } else {
      r.Fail("placement", "expected front or scattered");
    }
  }
  if (const json* v = r.Get(obj, "eps")) {
    adv.eps = r.Number(*v, "eps");
    if (!(adv.eps > 0.0)) r.Fail("eps", "must be positive");
  }
  if (const json* v = r.Get(obj, "hi")) adv.hi = r.Number(*v, "hi");
  if (const json* v = r.Get(obj, "lo_max")) adv.lo_max = r.Number(*v, "lo_max");
  if (!(adv.hi > adv.lo_max && adv.lo_max > 0.0)) {
    r.Fail(r.Get(obj, "hi") ? "hi" : "lo_max", "need hi > lo_max > 0");
  }
  if (const json* v = r.Get(obj, "eta")) {
    adv.eta = r.Number(*v, "eta");
    if (!(adv.eta > 0.0)) r.Fail("eta", "must be positive");
  }
  if (const json* v = r.Get(obj, "knowledge")) {
    const std::string s = r.String(*v, "knowledge");
    if (s == "full") {
      adv.knowledge = AdversaryKnowledge::kFullSchedule;
    } else if (s == "history") {
      adv.knowledge = AdversaryKnowledge::kHistoryOnly;
    } else {
      r.Fail("knowledge", "expected full or history");
    }
  }
}

void ReadConstants(const Reader& r, const json& v, ExperimentConfig& config) {
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    if (s != "paper" && s != "practical") {
      r.Fail("constants", "expected paper, practical or an object");
    }
    ApplyProfile(config, s);
    return;
  }
  const json& obj = r.Object(v, "constants");
  r.AllowOnly(obj, {"a1", "a4", "scale_budget"}, "constants");
  AlgoConstants c = AlgoConstants::Practical();
  if (const json* x = r.Get(obj, "a1")) c.a1 = r.Number(*x, "a1");
  if (const json* x = r.Get(obj, "a4")) c.a4 = r.Number(*x, "a4");
  if (const json* x = r.Get(obj, "scale_budget")) {
    c.scale_budget = r.Bool(*x, "scale_budget");
  }
  try {
    c.Validate();
  } catch (const InvalidParameter& e) {
    r.Fail("constants", e.what());
  }
  config.constants = c;
  config.profile = "custom";
}

void CheckPatternRules(const Reader& r, const ExperimentConfig& c) {
  const Pattern p = c.adversary.pattern;
  const std::string gamma_key = r.Line("gamma") > 0 ? "gamma" : "pattern";
  if (p == Pattern::kNone && c.gamma != 0) {
    r.Fail("gamma", "pattern none needs gamma = 0");
  }
  const bool burst = p == Pattern::kTooMany || p == Pattern::kTooFew ||
                     p == Pattern::kKleinbergKiller;
  if (burst && c.adversary.placement != Placement::kFront) {
    r.Fail("placement", "pattern " + std::string(PatternName(p)) +
                            " needs front placement");
  }
  if (p != Pattern::kNone && p != Pattern::kRandom && c.gamma < 1) {
    r.Fail(gamma_key, "pattern " + std::string(PatternName(p)) +
                          " needs gamma >= 1");
  }
}

ExperimentConfig ReadExperiment(const Reader& r, bool allow_grid) {
  const json& root = r.root();
  if (allow_grid) {
    r.AllowOnly(root, {"n", "k", "ell", "gamma", "adversary", "pool",
                       "algorithms", "constants", "trials", "base_seed",
                       "trace_trials", "diagnostics", "grid"},
                "config");
  } else {
    r.AllowOnly(root, {"n", "k", "ell", "gamma", "adversary", "pool",
                       "algorithms", "constants", "trials", "base_seed",
                       "trace_trials", "diagnostics"},
                "config");
  }
  ExperimentConfig c;
  for (const char* key : {"n", "k"}) {
    if (!r.Get(root, key)) throw ConfigError(1, std::string("missing \"") + key + "\"");
  }
  c.n = r.Integer(root["n"], "n");
  if (c.n < 1) r.Fail("n", "must be at least 1");
  c.k = r.Number(root["k"], "k");
  if (!(c.k > 0.0)) r.Fail("k", "must be positive");
  if (const json* v = r.Get(root, "ell")) {
    c.ell = r.Integer(*v, "ell");
    if (*c.ell < 1 || *c.ell > c.n) r.Fail("ell", "need 1 <= ell <= n");
  }
  if (const json* v = r.Get(root, "gamma")) {
    c.gamma = r.Integer(*v, "gamma");
    if (c.gamma < 0) r.Fail("gamma", "must be nonnegative");
  }
  if (const json* v = r.Get(root, "adversary")) {
    ReadAdversary(r, r.Object(*v, "adversary"), c.adversary);
  }
  if (const json* v = r.Get(root, "pool")) {
    const json& obj = r.Object(*v, "pool");
    r.AllowOnly(obj, {"value_min", "value_max", "weight_min", "weight_max", "seed"},
                "pool");
    if (const json* x = r.Get(obj, "value_min")) c.pool.value_min = r.Number(*x, "value_min");
    if (const json* x = r.Get(obj, "value_max")) c.pool.value_max = r.Number(*x, "value_max");
    if (const json* x = r.Get(obj, "weight_min")) c.pool.weight_min = r.Number(*x, "weight_min");
    if (const json* x = r.Get(obj, "weight_max")) c.pool.weight_max = r.Number(*x, "weight_max");
    if (const json* x = r.Get(obj, "seed")) c.pool_seed = r.Unsigned(*x, "seed");
    if (!(c.pool.value_max > c.pool.value_min && c.pool.value_min >= 0.0)) {
      r.Fail("value_max", "need 0 <= value_min < value_max");
    }
    if (!(c.pool.weight_max > c.pool.weight_min && c.pool.weight_min >= 0.0 &&
          c.pool.weight_max <= 1.0)) {
      r.Fail("weight_max", "need 0 <= weight_min < weight_max <= 1");
    }
  }
  if (const json* v = r.Get(root, "algorithms")) {
    const json& arr = r.Array(*v, "algorithms");
    if (arr.empty()) r.Fail("algorithms", "must not be empty");
    c.algorithms.clear();
    for (const json& a : arr) {
      const Algorithm alg = ReadAlgorithm(r, a, "algorithms");
      if (std::find(c.algorithms.begin(), c.algorithms.end(), alg) !=
          c.algorithms.end()) {
        r.Fail("algorithms", "duplicate algorithm");
      }
      c.algorithms.push_back(alg);
    }
  }
  if (const json* v = r.Get(root, "constants")) ReadConstants(r, *v, c);
  if (const json* v = r.Get(root, "trials")) {
    c.trials = r.Integer(*v, "trials");
    if (c.trials < 1) r.Fail("trials", "must be at least 1");
  }
  if (const json* v = r.Get(root, "base_seed")) {
    c.base_seed = r.Unsigned(*v, "base_seed");
  }
  if (const json* v = r.Get(root, "trace_trials")) {
    c.trace_trials = r.Integer(*v, "trace_trials");
    if (c.trace_trials < 0) r.Fail("trace_trials", "must be nonnegative");
  }
  if (const json* v = r.Get(root, "diagnostics")) {
    const json& obj = r.Object(*v, "diagnostics");
    r.AllowOnly(obj, {"occupation_numerator", "a5", "relaxed_checkpoints"},
                "diagnostics");
    if (const json* x = r.Get(obj, "occupation_numerator")) {
      c.occupation.numerator = r.Number(*x, "occupation_numerator");
      if (!(c.occupation.numerator > 0.0)) {
        r.Fail("occupation_numerator", "must be positive");
      }
    }
    if (const json* x = r.Get(obj, "a5")) {
      c.occupation.a5 = r.Number(*x, "a5");
      if (!(c.occupation.a5 >= 0.0)) r.Fail("a5", "must be nonnegative");
    }
    if (const json* x = r.Get(obj, "relaxed_checkpoints")) {
      const int64_t m = r.Integer(*x, "relaxed_checkpoints");
      if (m < 1 || m > 1000) r.Fail("relaxed_checkpoints", "need 1..1000");
      c.relaxed_checkpoints = static_cast<int>(m);
    }
  }
  // Sweeps check the rules per grid point.
  if (!allow_grid) CheckPatternRules(r, c);
  return c;
}

}  // namespace

void ApplyProfile(ExperimentConfig& config, std::string_view profile) {
  if (profile == "paper") {
    config.constants = AlgoConstants::Paper();
  } else if (profile == "practical") {
    config.constants = AlgoConstants::Practical();
  } else {
    throw InvalidParameter("unknown profile: " + std::string(profile));
  }
  config.profile = std::string(profile);
}

ExperimentConfig ParseExperimentConfig(std::string_view text) {
  const Reader r(text);
  ExperimentConfig c = ReadExperiment(r, false);
  try {
    Prepare(c);
  } catch (const InvalidParameter& e) {
    throw ConfigError(r.Line("n"), e.what());
  }
  return c;
}

SweepConfig ParseSweepConfig(std::string_view text) {
  const Reader r(text);
  SweepConfig s;
  s.base = ReadExperiment(r, true);
  const json* grid = r.Get(r.root(), "grid");
  if (!grid) throw ConfigError(1, "missing \"grid\"");
  const json& g = r.Object(*grid, "grid");
  r.AllowOnly(g, {"k", "gamma", "pattern", "algorithms"}, "grid");
  if (g.empty()) r.Fail("grid", "empty grid");
  for (auto it = g.begin(); it != g.end(); ++it) {
    const json& arr = r.Array(it.value(), it.key());
    if (arr.empty()) r.Fail(it.key(), "empty grid axis");
  }
  if (const json* v = r.Get(g, "k")) {
    for (const json& x : *v) {
      const double k = r.Number(x, "k");
      if (!(k > 0.0)) r.Fail("k", "must be positive");
      s.k.push_back(k);
    }
  }
  if (const json* v = r.Get(g, "gamma")) {
    for (const json& x : *v) {
      const int64_t gamma = r.Integer(x, "gamma");
      if (gamma < 0) r.Fail("gamma", "must be nonnegative");
      s.gamma.push_back(gamma);
    }
  }
  if (const json* v = r.Get(g, "pattern")) {
    for (const json& x : *v) s.pattern.push_back(ReadPattern(r, x, "pattern"));
  }
  if (const json* v = r.Get(g, "algorithms")) {
    for (const json& x : *v) {
      s.algorithm.push_back(ReadAlgorithm(r, x, "algorithms"));
    }
  }
  return s;
}

// ---------------------------------------------------------------------------
// Running

PreparedExperiment Prepare(const ExperimentConfig& config) {
  config.constants.Validate();
  const int64_t ell = config.ell.value_or(DefaultWindowSize(config.n, config.k));
  const int64_t windows = (config.n + ell - 1) / ell;
  if (config.gamma > windows) {
    throw InvalidParameter("gamma exceeds the number of windows");
  }
  const std::vector<int64_t> cover =
      config.adversary.placement == Placement::kFront
          ? FrontCover(config.gamma)
          : ScatteredCover(windows, config.gamma);
  ModelParams params =
      ModelParams::Create(config.n, config.k, config.gamma, cover, ell);
  Rng rng(config.pool_seed.value_or(config.base_seed), 1);
  const auto ro = static_cast<size_t>(params.NumRoTimes());
  std::vector<Item> items;
  AdversaryStrategy strategy = StaticAdversary{};
  switch (config.adversary.pattern) {
    case Pattern::kNone:
      if (config.gamma != 0) {
        throw InvalidParameter("pattern none needs gamma = 0");
      }
      items = UniformPool(ro, config.pool, rng);
      break;
    case Pattern::kTooMany: {
      GeneratedInstance g = GenTooMany(params);
      items = std::move(g.pool);
      strategy = std::move(g.strategy);
      break;
    }
    case Pattern::kTooFew: {
      GeneratedInstance g = GenTooFew(params, config.adversary.eps);
      items = std::move(g.pool);
      strategy = std::move(g.strategy);
      break;
    }
    case Pattern::kKleinbergKiller: {
      GeneratedInstance g = GenKleinbergKiller(params, config.adversary.hi,
                                               config.adversary.lo_max, rng);
      items = std::move(g.pool);
      strategy = std::move(g.strategy);
      break;
    }
    case Pattern::kDensityTopper:
      items = UniformPool(ro, config.pool, rng);
      strategy = GenDensityTopper(config.adversary.eta, config.adversary.knowledge);
      break;
    case Pattern::kRandom:
      items = UniformPool(ro, config.pool, rng);
      strategy = RandomAdversary(params, config.pool, rng);
      break;
  }
  auto pool = std::make_shared<const RoPool>(std::move(items), config.k);
  return PreparedExperiment{std::move(params), std::move(pool),
                            std::move(strategy)};
}

namespace {

constexpr int64_t kChunkTrials = 16;
constexpr size_t kMaxInvariantMessages = 5;

std::vector<int64_t> RelaxedCheckpoints(const ExperimentConfig& c) {
  const int64_t lo = std::max<int64_t>(1, c.n / 100);
  const int64_t hi = std::max<int64_t>(lo, c.n / 4);
  return GeometricTimes(lo, hi, c.relaxed_checkpoints);
}

struct AlgoAccumulators {
  AlgoAccumulators(const ModelParams& params, const AlgoConstants& constants,
                   std::vector<int64_t> checkpoints)
      : rank(params), occupation(params, constants), relaxed(checkpoints) {}

  void Merge(const AlgoAccumulators& other) {
    ratio.Merge(other.ratio);
    rank.Merge(other.rank);
    occupation.Merge(other.occupation);
    relaxed.Merge(other.relaxed);
    invariant_failures += other.invariant_failures;
    for (const std::string& m : other.invariant_messages) {
      if (invariant_messages.size() < kMaxInvariantMessages) {
        invariant_messages.push_back(m);
      }
    }
    no_ro_picks += other.no_ro_picks;
  }

  RatioAccumulator ratio;
  RankProfileAccumulator rank;
  OccupationAccumulator occupation;
  RelaxedAccumulator relaxed;
  int64_t invariant_failures = 0;
  std::vector<std::string> invariant_messages;
  int64_t no_ro_picks = 0;
};

struct ChunkResult {
  std::vector<AlgoAccumulators> algos;
  std::vector<TrialRow> rows;
  std::vector<Trace> traces;
};

AlgoConstants ConstantsFor(Algorithm alg, const AlgoConstants& constants) {
  if (alg == Algorithm::kBaro) return constants;
  const double inf = std::numeric_limits<double>::infinity();
  return AlgoConstants{inf, inf, false};
}

ChunkResult RunChunk(const ExperimentConfig& config,
                     const PreparedExperiment& prep, int64_t first,
                     int64_t last) {
  ChunkResult out;
  const std::vector<int64_t> checkpoints = RelaxedCheckpoints(config);
  for (Algorithm alg : config.algorithms) {
    out.algos.emplace_back(prep.params, ConstantsFor(alg, config.constants),
                           checkpoints);
  }
  for (int64_t trial = first; trial < last; ++trial) {
    const uint64_t seed = config.base_seed + static_cast<uint64_t>(trial);
    const Schedule schedule =
        BuildSchedule(prep.pool, prep.params, prep.strategy, seed);
    for (size_t a = 0; a < config.algorithms.size(); ++a) {
      const Algorithm alg = config.algorithms[a];
      Trace trace = RunAlgorithm(alg, schedule, config.constants);
      AlgoAccumulators& acc = out.algos[a];
      TrialRow row;
      row.trial = trial;
      row.seed = seed;
      row.algorithm = alg;
      row.ro_value = trace.RoValue();
      row.total_value = trace.TotalValue();
      row.occupation = trace.TotalOccupation();
      for (const StepRecord& r : trace.records) {
        row.picks += r.picked;
        row.ro_picks += r.picked && r.is_ro;
      }
      const InvariantReport inv = CheckTraceInvariants(trace);
      row.invariants_ok = inv.ok();
      if (!inv.ok()) {
        ++acc.invariant_failures;
        if (acc.invariant_messages.size() < kMaxInvariantMessages &&
            !inv.violations.empty()) {
          acc.invariant_messages.push_back("trial " + std::to_string(trial) +
                                           ": " + inv.violations.front());
        }
      }
      acc.no_ro_picks += row.ro_picks == 0;
      acc.ratio.Add(trace);
      acc.rank.Add(trace);
      acc.occupation.Add(trace);
      acc.relaxed.Add(trace);
      out.rows.push_back(row);
      if (trial < config.trace_trials) out.traces.push_back(std::move(trace));
    }
  }
  return out;
}

}  // namespace

ExperimentResult RunExperiment(const ExperimentConfig& config, int threads) {
  if (config.trials < 1) throw InvalidParameter("trials must be at least 1");
  if (config.algorithms.empty()) throw InvalidParameter("no algorithm selected");
  const PreparedExperiment prep = Prepare(config);
  const int64_t chunks = (config.trials + kChunkTrials - 1) / kChunkTrials;

  std::optional<ChunkResult> merged;
  std::vector<std::optional<ChunkResult>> pending(chunks);
  int64_t next_chunk = 0;
  int64_t next_merge = 0;
  std::mutex mu;
  std::exception_ptr error;

  auto merge_ready = [&]() {
    // Called with mu held.
    while (next_merge < chunks && pending[next_merge]) {
      ChunkResult c = std::move(*pending[next_merge]);
      pending[next_merge].reset();
      if (!merged) {
        merged = std::move(c);
      } else {
        for (size_t a = 0; a < c.algos.size(); ++a) {
          merged->algos[a].Merge(c.algos[a]);
        }
        merged->rows.insert(merged->rows.end(), c.rows.begin(), c.rows.end());
        for (Trace& t : c.traces) merged->traces.push_back(std::move(t));
      }
      ++next_merge;
    }
  };

  auto worker = [&]() {
    while (true) {
      int64_t chunk;
      {
        std::lock_guard<std::mutex> lock(mu);
        if (error || next_chunk == chunks) return;
        chunk = next_chunk++;
      }
      try {
        const int64_t first = chunk * kChunkTrials;
        const int64_t last = std::min(config.trials, first + kChunkTrials);
        ChunkResult result = RunChunk(config, prep, first, last);
        std::lock_guard<std::mutex> lock(mu);
        pending[chunk] = std::move(result);
        merge_ready();
      } catch (...) {
        std::lock_guard<std::mutex> lock(mu);
        if (!error) error = std::current_exception();
        return;
      }
    }
  };

  const int workers =
      static_cast<int>(std::clamp<int64_t>(threads, 1, chunks));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < workers; ++i) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }
  if (error) std::rethrow_exception(error);

  ExperimentResult result;
  result.config = config;
  result.params = prep.params;
  result.opt_ro = prep.pool->opt_value();
  result.pool_size = static_cast<int64_t>(prep.pool->size());
  result.rows = std::move(merged->rows);
  result.traces = std::move(merged->traces);
  for (size_t a = 0; a < config.algorithms.size(); ++a) {
    const AlgoAccumulators& acc = merged->algos[a];
    AlgorithmResult r;
    r.algorithm = config.algorithms[a];
    r.ratio = acc.ratio.Report(result.opt_ro);
    r.rank_profile = acc.rank.Profile();
    r.occupation = acc.occupation.Profile(config.occupation);
    r.relaxed = acc.relaxed.Report();
    r.invariant_failures = acc.invariant_failures;
    r.invariant_messages = acc.invariant_messages;
    r.trials_without_ro_picks = acc.no_ro_picks;
    result.results.push_back(std::move(r));
  }
  const std::vector<int64_t> times = GeometricTimes(1, config.n, 24);
  result.bounds =
      BoundCurves(prep.params, config.constants, times, config.occupation);
  return result;
}

std::vector<SweepRow> RunSweep(const SweepConfig& config, int threads) {
  const ExperimentConfig& base = config.base;
  const std::vector<double> ks =
      config.k.empty() ? std::vector<double>{base.k} : config.k;
  const std::vector<int64_t> gammas =
      config.gamma.empty() ? std::vector<int64_t>{base.gamma} : config.gamma;
  const std::vector<Pattern> patterns =
      config.pattern.empty() ? std::vector<Pattern>{base.adversary.pattern}
                             : config.pattern;
  std::vector<SweepRow> rows;
  for (double k : ks) {
    for (int64_t gamma : gammas) {
      for (Pattern pattern : patterns) {
        ExperimentConfig c = base;
        c.k = k;
        c.gamma = gamma;
        c.adversary.pattern = pattern;
        c.trace_trials = 0;
        if (!config.algorithm.empty()) c.algorithms = config.algorithm;
        const ExperimentResult result = RunExperiment(c, threads);
        for (const AlgorithmResult& r : result.results) {
          rows.push_back(SweepRow{k, gamma, pattern, r.algorithm, r.ratio,
                                  c.base_seed});
        }
      }
    }
  }
  return rows;
}

// ---------------------------------------------------------------------------
// Output

std::string FormatNumber(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

std::string TraceCsv(const Trace& trace) {
  std::string out =
      "t,is_ro,value,weight,rank,tentative,blocked_main,blocked_outer,picked,"
      "occupation\n";
  for (const StepRecord& r : trace.records) {
    out += std::to_string(r.time);
    out += r.is_ro ? ",1," : ",0,";
    out += FormatNumber(r.item.value) + "," + FormatNumber(r.item.weight) + ",";
    if (r.rank) out += FormatNumber(*r.rank);
    out += r.tentative ? ",1" : ",0";
    out += r.blocked_main ? ",1" : ",0";
    out += r.blocked_outer ? ",1" : ",0";
    out += r.picked ? ",1," : ",0,";
    out += FormatNumber(r.occupation) + "\n";
  }
  return out;
}

std::string TrialsCsv(const std::vector<TrialRow>& rows) {
  std::string out =
      "trial,seed,algorithm,ro_value,total_value,occupation,ro_picks,picks,"
      "invariants_ok\n";
  for (const TrialRow& r : rows) {
    out += std::to_string(r.trial) + "," + std::to_string(r.seed) + "," +
           std::string(AlgorithmName(r.algorithm)) + "," +
           FormatNumber(r.ro_value) + "," + FormatNumber(r.total_value) + "," +
           FormatNumber(r.occupation) + "," + std::to_string(r.ro_picks) + "," +
           std::to_string(r.picks) + "," + (r.invariants_ok ? "1" : "0") + "\n";
  }
  return out;
}

std::string SweepCsv(const std::vector<SweepRow>& rows) {
  std::string out =
      "k,gamma,pattern,algorithm,ratio_mean,ratio_ci95,trials,seed\n";
  for (const SweepRow& r : rows) {
    out += FormatNumber(r.k) + "," + std::to_string(r.gamma) + "," +
           std::string(PatternName(r.pattern)) + "," +
           std::string(AlgorithmName(r.algorithm)) + "," +
           FormatNumber(r.ratio.ratio_mean) + "," +
           FormatNumber(r.ratio.ratio_ci95) + "," +
           std::to_string(r.ratio.trials) + "," + std::to_string(r.seed) + "\n";
  }
  return out;
}

namespace {

// JSON has no infinities; they become null.
json Num(double x) {
  if (!std::isfinite(x)) return nullptr;
  return x;
}

json RatioJson(const RatioReport& r) {
  return json{{"ro_value_mean", Num(r.ro_value_mean)},
              {"opt_ro", Num(r.opt_ro)},
              {"ratio_mean", Num(r.ratio_mean)},
              {"ratio_ci95", Num(r.ratio_ci95)},
              {"trials", r.trials},
              {"applicable", r.applicable}};
}

json RankJson(const RankProfile& p) {
  json buckets = json::array();
  for (const RankBucket& b : p.buckets) {
    buckets.push_back(json{{"label", b.label},
                           {"lo", Num(b.lo)},
                           {"hi", Num(b.hi)},
                           {"hi_closed", b.hi_closed},
                           {"tentative", b.tentative},
                           {"count", b.count},
                           {"frequency", Num(b.frequency)},
                           {"bound", Num(b.bound)},
                           {"flagged", b.flagged}});
  }
  return json{{"min_time", p.min_time},
              {"any_flagged", p.any_flagged()},
              {"buckets", buckets}};
}

json OccupationJson(const OccupationProfile& p, const ModelParams& params,
                    const OccupationOptions& options) {
  json windows = json::array();
  for (const WindowStats& w : p.windows) {
    windows.push_back(json{{"index", w.index},
                           {"first", w.window.first},
                           {"last", w.window.last},
                           {"covered", params.IsCoveredWindow(w.index)},
                           {"tentative_mean", Num(w.tentative_mean)},
                           {"tentative_sd", Num(w.tentative_sd)},
                           {"tentative_max", Num(w.tentative_max)},
                           {"occupation_max", Num(w.occupation_max)},
                           {"blocked_frequency", Num(w.blocked_frequency)},
                           {"blocking_shape", Num(w.blocking_shape)}});
  }
  json curve = json::array();
  const int64_t n = params.n();
  const int64_t points = std::min<int64_t>(100, n);
  for (int64_t i = 1; i <= points; ++i) {
    const int64_t t = (i * n + points - 1) / points;
    curve.push_back(json{
        {"t", t},
        {"frequency", Num(p.blocked_by_t[t - 1])},
        {"shape", Num(BlockingShape(t, params, options.numerator, options.a5))}});
  }
  return json{{"outer_cap", Num(p.outer_cap)},
              {"trials", p.trials},
              {"windows", windows},
              {"blocking_curve", curve}};
}

json RelaxedJson(const RelaxedReport& r) {
  json points = json::array();
  for (const RelaxedPoint& p : r.points) {
    points.push_back(
        json{{"t", p.t}, {"mean", Num(p.mean)}, {"variance", Num(p.variance)}});
  }
  return json{{"points", points},
              {"slope", r.slope ? Num(*r.slope) : json(nullptr)}};
}

}  // namespace

std::string SummaryJson(const ExperimentResult& result) {
  const ExperimentConfig& c = result.config;
  json algorithms = json::array();
  for (Algorithm a : c.algorithms) algorithms.push_back(AlgorithmName(a));
  json config{
      {"n", c.n},
      {"k", Num(c.k)},
      {"ell", result.params.ell()},
      {"gamma", c.gamma},
      {"adversary_cover", result.params.adv_cover()},
      {"pattern", PatternName(c.adversary.pattern)},
      {"placement",
       c.adversary.placement == Placement::kFront ? "front" : "scattered"},
      {"algorithms", algorithms},
      {"profile", c.profile},
      {"constants",
       json{{"a1", Num(c.constants.a1)},
            {"a4", Num(c.constants.a4)},
            {"scale_budget", c.constants.scale_budget}}},
      {"trials", c.trials},
      {"base_seed", c.base_seed},
      {"pool_seed", c.pool_seed.value_or(c.base_seed)},
  };
  json results = json::array();
  const AlgorithmResult* baro = nullptr;
  for (const AlgorithmResult& r : result.results) {
    if (r.algorithm == Algorithm::kBaro) baro = &r;
    results.push_back(json{
        {"algorithm", AlgorithmName(r.algorithm)},
        {"ratio", RatioJson(r.ratio)},
        {"invariants",
         json{{"failures", r.invariant_failures},
              {"messages", r.invariant_messages}}},
        {"trials_without_ro_picks", r.trials_without_ro_picks},
        {"rank_profile", RankJson(r.rank_profile)},
        {"occupation",
         OccupationJson(r.occupation, result.params, c.occupation)},
        {"relaxed", RelaxedJson(r.relaxed)},
    });
  }
  json gaps = json::array();
  if (baro) {
    for (const AlgorithmResult& r : result.results) {
      if (r.algorithm == Algorithm::kBaro) continue;
      gaps.push_back(json{
          {"baseline", AlgorithmName(r.algorithm)},
          {"baro_ratio", Num(baro->ratio.ratio_mean)},
          {"baseline_ratio", Num(r.ratio.ratio_mean)},
          {"difference", Num(baro->ratio.ratio_mean - r.ratio.ratio_mean)}});
    }
  }
  json bounds = json::array();
  for (const BoundPoint& p : result.bounds) {
    bounds.push_back(json{{"t", p.t},
                          {"c_t", Num(p.c_t)},
                          {"eps_t", Num(p.eps_t)},
                          {"p_t", Num(p.p_t)}});
  }
  json summary{{"config", config},
               {"pool", json{{"size", result.pool_size},
                             {"opt_ro", Num(result.opt_ro)}}},
               {"results", results},
               {"ratio_gaps", gaps},
               {"bounds", bounds}};
  return summary.dump(2) + "\n";
}

}  // namespace baro
