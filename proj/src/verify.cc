#include "baro/verify.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "baro/diagnostics.h"
#include "baro/error.h"
#include "baro/inequalities.h"

namespace baro {

namespace {

constexpr size_t kMaxFailureNotes = 5;

std::string Fmt(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

Item RandomLpItem(Rng& rng) {
  Item item{10.0 * rng.UniformOpenClosed(), rng.UniformOpenClosed()};
  if (rng.Below(4) == 0) {
    item.value = (1.0 + static_cast<double>(rng.Below(3))) * item.weight;
  }
  return item;
}

}  // namespace

void CheckTally::Record(bool ok, const std::string& what) {
  if (ok) {
    ++pass;
    return;
  }
  ++fail;
  if (failures.size() < kMaxFailureNotes) failures.push_back(what);
}

int64_t SuiteReport::fails() const {
  int64_t total = 0;
  for (const CheckTally& c : checks) total += c.fail;
  return total;
}

const std::vector<std::string>& SuiteNames() {
  static const std::vector<std::string> names{
      "lp-equivalence", "lemma-sat", "lemma-lbpick", "bernstein",
      "inequalities"};
  return names;
}

bool IsSuite(std::string_view name) {
  const auto& names = SuiteNames();
  return std::find(names.begin(), names.end(), name) != names.end();
}

LpInstance RandomLpInstance(Rng& rng, size_t max_entries) {
  const size_t count = 1 + rng.Below(max_entries);
  const auto ell = static_cast<int64_t>(1 + rng.Below(count));
  std::vector<Item> items;
  for (size_t i = 0; i < count; ++i) items.push_back(RandomLpItem(rng));
  std::vector<uint64_t> ties(count);
  for (size_t i = 0; i < count; ++i) ties[i] = i;
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

std::vector<BernsteinConfig> BernsteinGrid(uint64_t seed) {
  Rng rng(seed, 7);
  auto uniform = [&rng](size_t size) {
    std::vector<double> u(size);
    for (double& x : u) x = rng.Uniform();
    return u;
  };
  std::vector<BernsteinConfig> grid;
  const std::vector<double> u100 = uniform(100);
  for (double tau : {1.0, 2.0, 4.0, 8.0, 12.0}) {
    grid.push_back({"uniform100/s30", u100, 30, tau});
  }
  const std::vector<double> u200 = uniform(200);
  for (double tau : {6.0, 15.0}) grid.push_back({"uniform200/s60", u200, 60, tau});
  std::vector<double> sparse(100, 0.0);
  std::fill(sparse.begin(), sparse.begin() + 10, 1.0);
  for (double tau : {3.0, 5.0}) grid.push_back({"sparse100/s50", sparse, 50, tau});
  grid.push_back({"const50/s20", std::vector<double>(50, 0.5), 20, 1.0});
  std::vector<double> alternating(40);
  for (size_t i = 0; i < alternating.size(); ++i) alternating[i] = i % 2;
  grid.push_back({"alternating40/s20", alternating, 20, 4.0});
  std::vector<double> linear(100);
  for (size_t i = 0; i < linear.size(); ++i) linear[i] = i / 99.0;
  grid.push_back({"linear100/s90", linear, 90, 2.0});
  return grid;
}

namespace {

SuiteReport LpEquivalence(Rng& rng, int64_t cases) {
  CheckTally tally{"greedy-vs-reference"};
  for (int64_t i = 0; i < cases; ++i) {
    const LpInstance inst = RandomLpInstance(rng, 12);
    const double greedy = SolveGreedy(inst).total_value;
    const double reference = SolveReference(inst).total_value;
    tally.Record(std::abs(greedy - reference) <= 1e-9,
                 "case " + std::to_string(i) + ": greedy " + Fmt(greedy) +
                     " reference " + Fmt(reference));
  }
  return {"lp-equivalence", {tally}};
}

SuiteReport LemmaSat(Rng& rng, int64_t cases) {
  CheckTally tally{"lemma-sat"};
  int64_t vacuous = 0;
  for (int64_t i = 0; i < cases; ++i) {
    const SatResult r = LemmaSatOracle(RandomSatScenario(rng));
    vacuous += r.vacuous;
    switch (r.outcome) {
      case OracleOutcome::kPass:
        ++tally.pass;
        break;
      case OracleOutcome::kFlag:
        ++tally.flag;
        break;
      case OracleOutcome::kFail:
        tally.Record(false, "case " + std::to_string(i) + ": X_t = " +
                                Fmt(r.fraction));
    }
  }
  tally.notes.emplace_back("vacuous", vacuous);
  return {"lemma-sat", {tally}};
}

SuiteReport LemmaLbPick(Rng& rng, int64_t cases) {
  CheckTally tally{"lemma-lbpick"};
  int64_t drawn = 0;
  int64_t literal_met = 0;
  int64_t literal_counterexamples = 0;
  // Scenarios outside the hypotheses are drawn and discarded; about a third
  // of the draws qualify.
  const int64_t max_draws = 50 * cases + 1000;
  while (tally.total() < cases && drawn < max_draws) {
    ++drawn;
    const LbPickResult r = LemmaLbPickOracle(RandomLbPickScenario(rng));
    literal_met += r.literal_hypotheses_met;
    literal_counterexamples += r.literal_counterexample;
    if (!r.hypotheses_met) continue;
    tally.Record(r.outcome != OracleOutcome::kFail,
                 "draw " + std::to_string(drawn) + ": X_t = " + Fmt(r.fraction));
  }
  if (tally.total() < cases) {
    tally.Record(false, "only " + std::to_string(tally.total()) +
                            " qualifying scenarios in " +
                            std::to_string(drawn) + " draws");
  }
  tally.notes.emplace_back("draws", drawn);
  tally.notes.emplace_back("literal-hypotheses-met", literal_met);
  tally.notes.emplace_back("literal-counterexamples", literal_counterexamples);
  return {"lemma-lbpick", {tally}};
}

CheckTally Bernstein(Rng& rng, int64_t samples, uint64_t seed) {
  CheckTally tally{"bernstein"};
  for (const BernsteinConfig& c : BernsteinGrid(seed)) {
    const TailCheck r = CheckWoReplacementTail(c.pool, c.s, c.tau, samples, rng);
    tally.Record(r.ok, c.label + " tau=" + Fmt(c.tau) + ": empirical " +
                           Fmt(r.empirical) + " > bound " + Fmt(r.bound));
  }
  return tally;
}

CheckTally ChebyshevSums(Rng& rng, int64_t cases) {
  CheckTally tally{"chebyshev-sum"};
  for (int64_t trial = 0; trial < cases; ++trial) {
    const size_t n = 1 + rng.Below(20);
    std::vector<double> a(n), b(n), p(n);
    for (size_t i = 0; i < n; ++i) {
      a[i] = rng.Uniform(-5.0, 5.0);
      b[i] = rng.Uniform(-5.0, 5.0);
      p[i] = rng.Below(5) == 0 ? 0.0 : rng.Uniform();
    }
    p[rng.Below(n)] += 0.1;
    std::sort(a.rbegin(), a.rend());
    std::sort(b.rbegin(), b.rend());
    tally.Record(CheckChebyshevSum(a, b, p),
                 "triple " + std::to_string(trial));
  }
  return tally;
}

CheckTally SamplingComparisons(Rng& rng) {
  CheckTally tally{"sampling-comparison"};
  // Structured functions on every (n, m) with n <= 7, m <= 3.
  for (int n = 2; n <= 7; ++n) {
    for (int m = 1; m <= 3 && m < n; ++m) {
      const std::vector<TupleFunction> fs{
          [](std::span<const int>) { return 1.0; },
          [](std::span<const int> x) {
            for (size_t i = 0; i < x.size(); ++i) {
              for (size_t j = i + 1; j < x.size(); ++j) {
                if (x[i] == x[j]) return 0.0;
              }
            }
            return 1.0;
          },
          [](std::span<const int> x) {
            double s = 0.0;
            for (int e : x) s += e;
            return s;
          },
          [](std::span<const int> x) { return x[0] == 0 ? 1.0 : 0.0; },
      };
      for (size_t f = 0; f < fs.size(); ++f) {
        const SamplingComparison r = CheckSamplingComparison(n, m, fs[f]);
        tally.Record(r.ok, "n=" + std::to_string(n) + " m=" + std::to_string(m) +
                               " f" + std::to_string(f));
      }
    }
  }
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 2 + static_cast<int>(rng.Below(6));
    const int m = 1 + static_cast<int>(rng.Below(std::min(3, n - 1)));
    std::vector<double> table(static_cast<size_t>(std::pow(n, m)));
    for (double& v : table) v = rng.Below(3) == 0 ? 0.0 : rng.Uniform(0, 10);
    const SamplingComparison r =
        CheckSamplingComparison(n, m, [&](std::span<const int> x) {
          size_t idx = 0;
          for (int e : x) idx = idx * n + e;
          return table[idx];
        });
    tally.Record(r.ok, "random f " + std::to_string(trial));
  }
  return tally;
}

CheckTally MomentGrid(Rng& rng) {
  CheckTally tally{"moment-bound"};
  int64_t unmet = 0;
  for (int64_t n : {10, 20, 50}) {
    for (double p : {0.1, 0.3, 0.5}) {
      for (int m : {2, 3, 4}) {
        const MomentCheck r = CheckMomentBound(n, p, m, 20000, rng);
        unmet += !r.hypothesis_met;
        const std::string what = "n=" + std::to_string(n) + " p=" + Fmt(p) +
                                 " m=" + std::to_string(m);
        if (r.hypothesis_met) {
          tally.Record(r.ok, what);
        } else if (r.ok) {
          ++tally.pass;
        } else {
          ++tally.flag;
        }
      }
    }
  }
  tally.notes.emplace_back("hypothesis-unmet", unmet);
  return tally;
}

CheckTally PsiIntegrals() {
  CheckTally tally{"psi-integral"};
  int64_t unmet = 0;
  for (double k : {100.0, 1e4}) {
    for (int m : {1, 2, 3}) {
      const PsiIntegralCheck r = CheckPsiIntegral(k, m);
      unmet += !r.hypothesis_met;
      tally.Record(r.ok, "k=" + Fmt(k) + " m=" + std::to_string(m) +
                             ": integral " + Fmt(r.integral) + " bound " +
                             Fmt(r.bound));
    }
  }
  tally.notes.emplace_back("hypothesis-unmet", unmet);
  return tally;
}

}  // namespace

SuiteReport RunSuite(std::string_view suite, uint64_t seed, int64_t cases) {
  Rng rng(seed);
  auto size = [cases](int64_t fallback) { return cases > 0 ? cases : fallback; };
  if (suite == "lp-equivalence") return LpEquivalence(rng, size(1000));
  if (suite == "lemma-sat") return LemmaSat(rng, size(10000));
  if (suite == "lemma-lbpick") return LemmaLbPick(rng, size(10000));
  if (suite == "bernstein") {
    return {"bernstein", {Bernstein(rng, size(100000), seed)}};
  }
  if (suite == "inequalities") {
    SuiteReport report{"inequalities", {}};
    report.checks.push_back(ChebyshevSums(rng, size(100000)));
    report.checks.push_back(SamplingComparisons(rng));
    report.checks.push_back(MomentGrid(rng));
    report.checks.push_back(PsiIntegrals());
    return report;
  }
  throw InvalidParameter("unknown suite: " + std::string(suite));
}

}  // namespace baro
