#include "baro/algo.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <queue>
#include <string>

#include "baro/error.h"

namespace baro {
namespace {

// Folds `decide` over the schedule, resolving adaptive adversarial items
// against the decisions made so far.
template <typename Decide>
Trace Drive(const Schedule& schedule, Algorithm algorithm,
            const AlgoConstants& constants, Decide&& decide) {
  Trace trace;
  trace.algorithm = algorithm;
  trace.params = schedule.params();
  trace.constants = constants;
  trace.seed = schedule.seed();
  trace.records.reserve(schedule.size());
  for (int64_t t = 1; t <= schedule.size(); ++t) {
    const Slot& slot = schedule.at(t);
    const Item item = slot.item ? *slot.item
                                : ResolveAdaptive(schedule, t, trace.records);
    StepRecord record = decide(item, t, slot.tie);
    record.time = t;
    record.item = item;
    record.is_ro = slot.label == Label::kRandomOrder;
    if (slot.ro_index) record.rank = schedule.pool().rank(*slot.ro_index);
    record.tentative_occupation = record.tentative ? item.weight : 0.0;
    record.occupation = record.picked ? item.weight : 0.0;
    trace.records.push_back(record);
  }
  return trace;
}

}  // namespace

AlgoState::AlgoState(const ModelParams& params, const AlgoConstants& constants)
    : params_(params),
      constants_(constants),
      lp_(params.ell(), params.InnerCap(constants.a1)),
      window_occupation_(params.num_windows(), 0.0) {
  constants.Validate();
}

StepRecord AlgoState::Advance(const Item& item, uint64_t tie) {
  if (step_ >= params_.n()) {
    throw InvalidParameter("algorithm stepped past the horizon");
  }
  ValidateItem(item);
  const int64_t t = step_ + 1;
  const double n = static_cast<double>(params_.n());
  const double scale = constants_.scale_budget ? BudgetScale(t, params_) : 1.0;
  const double budget = scale * static_cast<double>(t) / n * params_.k();

  StepRecord r;
  r.time = t;
  r.item = item;
  r.fraction = lp_.AddAndEvaluate(item, tie, budget);
  const TentativeFlags flags = TentativeIndicators(r.fraction);
  r.tentative = flags.tentative;
  r.full_pick = flags.full_pick;
  r.blocked_main = total_occupation_ > params_.k() - 1.0;
  if (t > 1) {
    const int64_t last = params_.WindowOf(t - 1);
    r.blocked_outer =
        window_occupation_[last] > params_.OuterCap(constants_.a4) - 1.0;
  }
  r.picked = r.tentative && !r.blocked_main && !r.blocked_outer;
  r.tentative_occupation = r.tentative ? item.weight : 0.0;
  r.occupation = r.picked ? item.weight : 0.0;

  total_occupation_ += r.occupation;
  window_occupation_[params_.WindowOf(t)] += r.occupation;
  step_ = t;
  return r;
}

std::pair<StepRecord, AlgoState> Step(AlgoState state, const Item& item,
                                      int64_t t, uint64_t tie) {
  if (t != state.step() + 1) {
    throw InvalidParameter("step expects time " +
                           std::to_string(state.step() + 1) + ", got " +
                           std::to_string(t));
  }
  StepRecord record = state.Advance(item, tie);
  return {record, std::move(state)};
}

Trace Run(const Schedule& schedule, const AlgoConstants& constants) {
  AlgoState state(schedule.params(), constants);
  return Drive(schedule, Algorithm::kBaro, constants,
               [&state](const Item& item, int64_t, uint64_t tie) {
                 return state.Advance(item, tie);
               });
}

Trace RunBaselinePrimal(const Schedule& schedule) {
  const ModelParams& params = schedule.params();
  const double inf = std::numeric_limits<double>::infinity();
  PrefixLp lp(params.n(), inf);
  double occupation = 0.0;
  const AlgoConstants constants{inf, inf, false};
  return Drive(
      schedule, Algorithm::kPrimal, constants,
      [&](const Item& item, int64_t t, uint64_t tie) {
        const double budget = std::ceil(static_cast<double>(t) /
                                        static_cast<double>(params.n()) *
                                        params.k());
        StepRecord r;
        r.fraction = lp.AddAndEvaluate(item, tie, budget);
        const TentativeFlags flags = TentativeIndicators(r.fraction);
        r.tentative = flags.tentative;
        r.full_pick = flags.full_pick;
        r.blocked_main = occupation > params.k() - 1.0;
        r.picked = r.tentative && !r.blocked_main;
        if (r.picked) occupation += item.weight;
        return r;
      });
}

Trace RunBaselineTopkFilter(const Schedule& schedule) {
  const ModelParams& params = schedule.params();
  const auto sample =
      static_cast<int64_t>(std::floor(static_cast<double>(params.n()) /
                                      std::exp(1.0)));
  const auto max_picks =
      static_cast<int64_t>(std::floor(params.k() + 1e-12));
  const size_t top = static_cast<size_t>(std::max<int64_t>(1, max_picks));
  std::priority_queue<double, std::vector<double>, std::greater<double>> best;
  double sample_max = -std::numeric_limits<double>::infinity();
  int64_t picks = 0;
  const double inf = std::numeric_limits<double>::infinity();
  return Drive(schedule, Algorithm::kTopkFilter, AlgoConstants{inf, inf, false},
               [&](const Item& item, int64_t t, uint64_t) {
                 const bool in_top =
                     best.size() < top || item.value > best.top();
                 best.push(item.value);
                 if (best.size() > top) best.pop();
                 StepRecord r;
                 if (t <= sample) {
                   sample_max = std::max(sample_max, item.value);
                   return r;
                 }
                 r.tentative = in_top && item.value > sample_max;
                 r.full_pick = r.tentative;
                 r.fraction = r.tentative ? 1.0 : 0.0;
                 r.blocked_main = r.tentative && picks + 1 > max_picks;
                 r.picked = r.tentative && !r.blocked_main;
                 if (r.picked) ++picks;
                 return r;
               });
}

Trace RunAlgorithm(Algorithm algorithm, const Schedule& schedule,
                   const AlgoConstants& constants) {
  switch (algorithm) {
    case Algorithm::kBaro:
      return Run(schedule, constants);
    case Algorithm::kPrimal:
      return RunBaselinePrimal(schedule);
    case Algorithm::kTopkFilter:
      return RunBaselineTopkFilter(schedule);
  }
  throw InvalidParameter("unknown algorithm");
}

std::vector<int64_t> ReplayTentativeMismatches(const Trace& trace,
                                               const Schedule& schedule) {
  const ModelParams& params = trace.params;
  std::vector<Item> items;
  std::vector<uint64_t> ties;
  std::vector<int64_t> mismatches;
  for (const StepRecord& r : trace.records) {
    items.push_back(r.item);
    ties.push_back(schedule.at(r.time).tie);
    const double scale =
        trace.constants.scale_budget ? BudgetScale(r.time, params) : 1.0;
    const double budget = scale * static_cast<double>(r.time) /
                          static_cast<double>(params.n()) * params.k();
    const LpInstance inst =
        MakePrefixInstance(items, ties, params.ell(), budget,
                           params.InnerCap(trace.constants.a1));
    const FractionalSolution sol = SolveGreedy(inst);
    if (TentativeIndicators(sol, items.size() - 1).tentative != r.tentative) {
      mismatches.push_back(r.time);
    }
  }
  return mismatches;
}

}  // namespace baro
