#include "baro/algo.h"

#include <gtest/gtest.h>

#include <memory>
#include <vector>

#include "baro/adversary.h"
#include "baro/error.h"
#include "baro/rng.h"
#include "test_support.h"

namespace baro {
namespace {

constexpr AlgoConstants kSlack{1e9, 1e9, true};

// Schedule whose items arrive in exactly the given order: every window of
// length one is adversarial and emits the next item.
Schedule Scripted(const std::vector<Item>& items, double k) {
  const auto n = static_cast<int64_t>(items.size());
  ModelParams params = ModelParams::Create(n, k, n, FrontCover(n), 1);
  StaticAdversary adv;
  for (int64_t t = 1; t <= n; ++t) adv.emissions.emplace_back(t, items[t - 1]);
  return BuildSchedule(std::make_shared<const RoPool>(std::vector<Item>{}, k),
                       params, adv, 0);
}

TEST(AlgoStepTest, FourUnitItemsAllPicked) {
  const Schedule s =
      testing::PureRandomOrder(std::vector<Item>(4, Item{1, 1}), 4, 9, 4);
  const Trace trace = baro::Run(s, kSlack);
  for (const StepRecord& r : trace.records) {
    EXPECT_TRUE(r.tentative);
    EXPECT_FALSE(r.blocked());
    EXPECT_TRUE(r.picked);
  }
  EXPECT_EQ(trace.RoValue(), 4.0);
}

TEST(AlgoStepTest, MainBudgetBlocksAboveKMinusOne) {
  ModelParams params = ModelParams::Create(4, 2, 0, {}, 4);
  AlgoState state(params, kSlack);
  EXPECT_TRUE(state.Advance(Item{4, 0.5}, 0).picked);
  EXPECT_TRUE(state.Advance(Item{1, 1.0}, 1).picked);
  EXPECT_EQ(state.total_occupation(), 1.5);
  const StepRecord r = state.Advance(Item{100, 0.5}, 2);
  EXPECT_TRUE(r.tentative);
  EXPECT_TRUE(r.blocked_main);
  EXPECT_FALSE(r.picked);
}

TEST(AlgoStepTest, OccupationExactlyKMinusOneDoesNotBlock) {
  ModelParams params = ModelParams::Create(4, 2, 0, {}, 4);
  AlgoState state(params, kSlack);
  EXPECT_TRUE(state.Advance(Item{4, 1.0}, 0).picked);
  const StepRecord r = state.Advance(Item{8, 1.0}, 1);
  EXPECT_FALSE(r.blocked_main);
  EXPECT_TRUE(r.picked);
}

TEST(AlgoStepTest, OuterCheckUsesPreviousWindow) {
  // ell = 2, n = 8, k = 4: outer cap a4 * 2 * 4 / 8 = a4.
  ModelParams params = ModelParams::Create(8, 4, 0, {}, 2);
  const AlgoConstants c{1.5, 1.5, false};
  AlgoState state(params, c);
  // Window 0 gets occupation 1 at t = 1; 1 > 1.5 - 1 blocks t = 2 (B_last is
  // window 0) and t = 3 (first time of window 1, B_last is still window 0).
  EXPECT_TRUE(state.Advance(Item{1, 1.0}, 0).picked);
  StepRecord r = state.Advance(Item{1, 0.25}, 1);
  EXPECT_TRUE(r.tentative);
  EXPECT_TRUE(r.blocked_outer);
  r = state.Advance(Item{1, 0.25}, 2);
  EXPECT_TRUE(r.tentative);
  EXPECT_TRUE(r.blocked_outer);
  // t = 4: B_last is window 1, still empty.
  r = state.Advance(Item{1, 0.25}, 3);
  EXPECT_FALSE(r.blocked_outer);
  EXPECT_TRUE(r.picked);
}

TEST(AlgoStepTest, ZeroFractionNeverPicked) {
  ModelParams params = ModelParams::Create(10, 1, 2, {}, 1);
  AlgoState state(params, kSlack);
  // c_1 = max(0, 1 - 8) = 0: empty budget.
  const StepRecord r = state.Advance(Item{5, 1}, 0);
  EXPECT_EQ(r.fraction, 0.0);
  EXPECT_FALSE(r.tentative);
  EXPECT_FALSE(r.picked);
}

TEST(AlgoStepTest, PureTransitionMatchesAdvance) {
  ModelParams params = ModelParams::Create(6, 2, 0, {}, 2);
  AlgoState a(params, AlgoConstants::Practical());
  AlgoState b(params, AlgoConstants::Practical());
  Rng rng(4);
  for (int64_t t = 1; t <= 6; ++t) {
    const Item item = testing::RandomItem(rng);
    auto [record, next] = Step(b, item, t, t);
    const StepRecord expected = a.Advance(item, t);
    EXPECT_EQ(record.picked, expected.picked);
    EXPECT_EQ(record.fraction, expected.fraction);
    EXPECT_EQ(b.step(), t - 1);
    b = std::move(next);
  }
  EXPECT_THROW(Step(b, Item{1, 1}, 3, 0), InvalidParameter);
  EXPECT_THROW(a.Advance(Item{1, 1}, 0), InvalidParameter);
}

TEST(AlgoRunTest, CoveringEverythingLeavesNoRandomOrderValue) {
  const Schedule s = Scripted(std::vector<Item>(6, Item{1, 1}), 2);
  EXPECT_EQ(s.pool().opt_value(), 0.0);
  EXPECT_EQ(baro::Run(s, AlgoConstants::Practical()).RoValue(), 0.0);
}

TEST(AlgoPropertyTest, InvariantsAndReplayOnRandomSchedules) {
  Rng rng(77);
  for (int trial = 0; trial < 400; ++trial) {
    const Schedule s = testing::RandomSchedule(rng, 60);
    const AlgoConstants c = rng.Bernoulli(0.5)
                                ? AlgoConstants::Practical()
                                : AlgoConstants{rng.Uniform(0.5, 3.0), 4.0,
                                                rng.Bernoulli(0.7)};
    const Trace trace = baro::Run(s, c);
    const InvariantReport report = CheckTraceInvariants(trace);
    EXPECT_TRUE(report.ok()) << report.violations.front();
    EXPECT_TRUE(ReplayTentativeMismatches(trace, s).empty());
    for (Algorithm alg : {Algorithm::kPrimal, Algorithm::kTopkFilter}) {
      const InvariantReport base = CheckTraceInvariants(RunAlgorithm(alg, s, c));
      EXPECT_TRUE(base.ok());
    }
  }
}

TEST(AlgoPropertyTest, DeterministicRuns) {
  Rng rng(78);
  for (int trial = 0; trial < 50; ++trial) {
    const Schedule s = testing::RandomSchedule(rng, 80);
    const Trace a = baro::Run(s, AlgoConstants::Practical());
    const Trace b = baro::Run(s, AlgoConstants::Practical());
    ASSERT_EQ(a.records.size(), b.records.size());
    for (size_t i = 0; i < a.records.size(); ++i) {
      EXPECT_EQ(a.records[i].fraction, b.records[i].fraction);
      EXPECT_EQ(a.records[i].picked, b.records[i].picked);
    }
  }
}

TEST(BaselinePrimalTest, TooManyFillsWithAdversarialItems) {
  const ModelParams p = ModelParams::Create(100, 10, 2, FrontCover(2), 5);
  const GeneratedInstance g = GenTooMany(p);
  const Schedule s = BuildSchedule(
      std::make_shared<const RoPool>(g.pool, p.k()), p, g.strategy, 1);
  const Trace trace = RunBaselinePrimal(s);
  EXPECT_EQ(trace.RoValue(), 0.0);
  EXPECT_EQ(trace.TotalOccupation(), 10.0);
  EXPECT_TRUE(CheckTraceInvariants(trace).ok());
}

TEST(BaselinePrimalTest, SingleItemKOne) {
  const Schedule s = testing::PureRandomOrder({Item{2, 0.5}}, 1, 0, 1);
  const Trace trace = RunBaselinePrimal(s);
  EXPECT_TRUE(trace.records[0].picked);
}

TEST(TopkFilterTest, PicksPostSampleRecords) {
  std::vector<Item> items;
  for (int v = 1; v <= 10; ++v) items.push_back(Item{double(v), 1});
  Trace trace = RunBaselineTopkFilter(Scripted(items, 1));
  std::vector<int64_t> picked;
  for (const StepRecord& r : trace.records) {
    if (r.picked) picked.push_back(r.time);
  }
  EXPECT_EQ(picked, std::vector<int64_t>{4});

  trace = RunBaselineTopkFilter(Scripted(items, 3));
  picked.clear();
  for (const StepRecord& r : trace.records) {
    if (r.picked) picked.push_back(r.time);
  }
  EXPECT_EQ(picked, (std::vector<int64_t>{4, 5, 6}));
}

TEST(TopkFilterTest, DegenerateShortHorizon) {
  // floor(2 / e) = 0: no sample, the first arrival is a record.
  const Trace trace =
      RunBaselineTopkFilter(Scripted({Item{1, 1}, Item{2, 1}}, 1));
  EXPECT_TRUE(trace.records[0].picked);
  EXPECT_FALSE(trace.records[1].picked);
}

TEST(TopkFilterTest, RejectsValuesOutsideTopK) {
  // Sample {5, 4}; nothing beats 5 until t = 7.
  const Trace trace = RunBaselineTopkFilter(Scripted(
      {{5, 1}, {4, 1}, {3, 1}, {2, 1}, {1, 1}, {0.5, 1}, {6, 1}, {7, 1}}, 2));
  std::vector<int64_t> picked;
  for (const StepRecord& r : trace.records) {
    if (r.picked) picked.push_back(r.time);
  }
  EXPECT_EQ(picked, (std::vector<int64_t>{7, 8}));
}

}  // namespace
}  // namespace baro
