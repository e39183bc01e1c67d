#include "baro/trace.h"

#include <algorithm>
#include <string>
#include <unordered_map>

#include "baro/error.h"

namespace baro {

std::string_view AlgorithmName(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::kBaro:
      return "baro";
    case Algorithm::kPrimal:
      return "primal";
    case Algorithm::kTopkFilter:
      return "topk";
  }
  return "unknown";
}

Algorithm ParseAlgorithm(std::string_view name) {
  if (name == "baro") return Algorithm::kBaro;
  if (name == "primal") return Algorithm::kPrimal;
  if (name == "topk") return Algorithm::kTopkFilter;
  throw InvalidParameter("unknown algorithm '" + std::string(name) +
                         "' (expected baro, primal or topk)");
}

double Trace::RoValue() const {
  double sum = 0.0;
  for (const StepRecord& r : records) {
    if (r.is_ro && r.picked) sum += r.item.value;
  }
  return sum;
}

double Trace::TotalValue() const {
  double sum = 0.0;
  for (const StepRecord& r : records) {
    if (r.picked) sum += r.item.value;
  }
  return sum;
}

double Trace::TotalOccupation() const {
  double sum = 0.0;
  for (const StepRecord& r : records) sum += r.occupation;
  return sum;
}

InvariantReport CheckTraceInvariants(const Trace& trace) {
  constexpr double kSlack = 1e-9;
  InvariantReport report;
  const ModelParams& params = trace.params;
  std::vector<double> window_occupation(params.num_windows(), 0.0);
  for (const StepRecord& r : trace.records) {
    report.total_occupation += r.occupation;
    window_occupation[params.WindowOf(r.time)] += r.occupation;
    const bool chain_ok = (!r.picked || (r.tentative && !r.blocked())) &&
                          (!r.blocked() || !r.picked);
    const bool occupation_ok =
        r.occupation == (r.picked ? r.item.weight : 0.0) &&
        r.tentative_occupation == (r.tentative ? r.item.weight : 0.0);
    if (!chain_ok || !occupation_ok) {
      report.implications = false;
      report.violations.push_back("record inconsistency at t=" +
                                  std::to_string(r.time));
    }
  }
  if (static_cast<int64_t>(trace.records.size()) != params.n()) {
    report.implications = false;
    report.violations.push_back("trace length differs from n");
  }
  if (report.total_occupation > params.k() + kSlack) {
    report.feasible = false;
    report.violations.push_back("total occupation " +
                                std::to_string(report.total_occupation) +
                                " exceeds k");
  }
  report.max_window_occupation =
      window_occupation.empty()
          ? 0.0
          : *std::max_element(window_occupation.begin(),
                              window_occupation.end());
  if (trace.algorithm == Algorithm::kBaro) {
    // Below 1 the cap cannot stop the first pick of a window, after which
    // every later pick there is blocked.
    const double cap = std::max(1.0, params.OuterCap(trace.constants.a4));
    for (size_t w = 0; w < window_occupation.size(); ++w) {
      if (window_occupation[w] > cap + kSlack) {
        report.window_safe = false;
        report.violations.push_back("window " + std::to_string(w) +
                                    " occupation exceeds max(1, a4 ell k / n)");
      }
    }
  }
  return report;
}

}  // namespace baro
