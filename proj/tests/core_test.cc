#include "baro/core.h"

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "baro/error.h"
#include "baro/rng.h"
#include "test_support.h"

namespace baro {
namespace {

TEST(ItemTest, RejectsZeroValueAndOversizedWeight) {
  EXPECT_THROW(ValidateItem(Item{0.0, 0.5}), InvalidParameter);
  EXPECT_THROW(ValidateItem(Item{1.0, 0.0}), InvalidParameter);
  EXPECT_THROW(ValidateItem(Item{1.0, 1.5}), InvalidParameter);
  EXPECT_NO_THROW(ValidateItem(Item{1.0, 1.0}));
}

TEST(SortPoolTest, OrdersByDensity) {
  const SortedPool sorted = SortPool({{2, 1}, {9, 3}, {1, 1}});
  ASSERT_EQ(sorted.items.size(), 3u);
  EXPECT_EQ(sorted.items[0], (Item{9, 3}));
  EXPECT_EQ(sorted.items[1], (Item{2, 1}));
  EXPECT_EQ(sorted.items[2], (Item{1, 1}));
  EXPECT_EQ(sorted.order, (std::vector<size_t>{1, 0, 2}));
}

TEST(SortPoolTest, EqualDensityKeepsIndexOrder) {
  const SortedPool sorted = SortPool({{1, 1}, {2, 2}});
  EXPECT_EQ(sorted.order, (std::vector<size_t>{0, 1}));
}

TEST(SortPoolTest, Empty) {
  const SortedPool sorted = SortPool({});
  EXPECT_TRUE(sorted.items.empty());
  EXPECT_TRUE(sorted.order.empty());
}

TEST(WeightedRanksTest, Examples) {
  RankTable table = WeightedRanks({{3, 1}, {1, 0.5}, {1, 1}}, 2.0);
  ASSERT_EQ(table.ranks.size(), 3u);
  EXPECT_DOUBLE_EQ(table.ranks[0], 0.0);
  EXPECT_DOUBLE_EQ(table.ranks[1], 0.5);
  EXPECT_DOUBLE_EQ(table.ranks[2], 0.75);
  EXPECT_DOUBLE_EQ(table.sentinel, 1.25);

  table = WeightedRanks({{1, 1}}, 7.0);
  EXPECT_EQ(table.ranks, std::vector<double>{0.0});
  EXPECT_DOUBLE_EQ(table.sentinel, 1.0 / 7.0);

  table = WeightedRanks(std::vector<Item>(8, Item{1, 1}), 4.0);
  for (size_t i = 0; i < 8; ++i) EXPECT_DOUBLE_EQ(table.ranks[i], 0.25 * i);

  EXPECT_THROW(WeightedRanks({{1, 1}}, 0.0), InvalidParameter);
}

TEST(WeightedRanksTest, IncrementsAreWeightOverK) {
  Rng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const double k = rng.Uniform(0.5, 20.0);
    const SortedPool sorted =
        SortPool(testing::RandomItems(rng, 1 + rng.Below(30)));
    const RankTable table = WeightedRanks(sorted.items, k);
    EXPECT_EQ(table.ranks[0], 0.0);
    for (size_t i = 0; i < sorted.items.size(); ++i) {
      const double next =
          i + 1 < table.ranks.size() ? table.ranks[i + 1] : table.sentinel;
      EXPECT_NEAR(next - table.ranks[i], sorted.items[i].weight / k, 1e-12);
      EXPECT_LE(next - table.ranks[i], 1.0 / k + 1e-12);
    }
  }
}

TEST(RanksByPoolIndexTest, MatchesSortedRanks) {
  const std::vector<Item> pool{{1, 1}, {9, 1}, {4, 0.5}};
  const std::vector<double> ranks = RanksByPoolIndex(pool, 2.0);
  EXPECT_DOUBLE_EQ(ranks[1], 0.0);
  EXPECT_DOUBLE_EQ(ranks[2], 0.5);
  EXPECT_DOUBLE_EQ(ranks[0], 0.75);
}

TEST(PsiTest, Cases) {
  EXPECT_EQ(Psi(0.5, 100), 1.0);
  EXPECT_DOUBLE_EQ(Psi(25, 100), 0.02);
  EXPECT_DOUBLE_EQ(Psi(1, 100), 0.02);
  EXPECT_DOUBLE_EQ(Psi(50, 100), 0.02);
  EXPECT_NEAR(Psi(60, 100), 4e-4, 1e-15);
}

TEST(PsiTest, NonincreasingOnDenseGrid) {
  // At k = 3 the tail starts above 2/k (4 k^-1.5 > 2/k), so the property is
  // checked from k = 4 on.
  for (double k : {4.0, 80.0, 100.0, 1e4}) {
    double prev = Psi(0.0, k);
    for (int i = 1; i <= 20000; ++i) {
      const double gamma = 200.0 * i / 20000.0;
      const double cur = Psi(gamma, k);
      EXPECT_LE(cur, prev) << "k=" << k << " gamma=" << gamma;
      prev = cur;
    }
  }
  for (double k : {80.0, 500.0}) {
    for (double gamma = 1.0; gamma <= 200.0; gamma += 0.25) {
      EXPECT_LE(Psi(gamma, k), 1.0);
    }
  }
}

TEST(BudgetScaleTest, Examples) {
  EXPECT_DOUBLE_EQ(BudgetScale(100, 2, 10), 0.2);
  EXPECT_EQ(BudgetScale(37, 0, 10), 1.0);
  EXPECT_EQ(BudgetScale(40, 2, 10), 0.0);
  EXPECT_EQ(BudgetScale(80, 2, 10), 0.0);
}

TEST(WindowPartitionTest, Examples) {
  const std::vector<Window> w = WindowPartition(10, 3);
  EXPECT_EQ(w, (std::vector<Window>{{1, 3}, {4, 6}, {7, 9}, {10, 10}}));
  EXPECT_EQ(TruncateWindows(w, 5), (std::vector<Window>{{1, 3}, {4, 5}}));
  EXPECT_EQ(WindowPartition(4, 4), (std::vector<Window>{{1, 4}}));
}

TEST(WindowPartitionTest, DisjointCover) {
  for (int64_t n = 1; n <= 40; ++n) {
    for (int64_t ell = 1; ell <= n + 2; ++ell) {
      int64_t next = 1;
      for (const Window& w : WindowPartition(n, ell)) {
        EXPECT_EQ(w.first, next);
        EXPECT_GE(w.size(), 1);
        EXPECT_LE(w.size(), ell);
        next = w.last + 1;
      }
      EXPECT_EQ(next, n + 1);
    }
  }
}

TEST(ModelParamsTest, DefaultWindowSize) {
  const ModelParams p = ModelParams::Create(10000, 100, 0);
  EXPECT_EQ(p.ell(), 461);
  EXPECT_EQ(DefaultWindowSize(10, 1.0), 1);
  EXPECT_EQ(DefaultWindowSize(10, 2.0), 4);
}

TEST(ModelParamsTest, HardErrors) {
  EXPECT_THROW(ModelParams::Create(0, 1, 0), InvalidParameter);
  EXPECT_THROW(ModelParams::Create(10, 0, 0), InvalidParameter);
  EXPECT_THROW(ModelParams::Create(10, 1, 1, {0, 1}, 2), InvalidParameter);
  EXPECT_THROW(ModelParams::Create(10, 1, 1, {5}, 2), InvalidParameter);
  EXPECT_NO_THROW(ModelParams::Create(10, 1, 2, {1, 0}, 2));
}

TEST(ModelParamsTest, RegimeWarnings) {
  EXPECT_TRUE(ModelParams::Create(10000, 100, 10, {}, 461)
                  .RegimeWarnings()
                  .empty());
  const ModelParams small = ModelParams::Create(100, 10, 0);
  EXPECT_FALSE(small.RegimeWarnings().empty());
  EXPECT_THROW(small.RequirePaperRegime(), InvalidParameter);
  // Covering every window is allowed but flagged.
  const ModelParams all = ModelParams::Create(10, 1, 5, {0, 1, 2, 3, 4}, 2);
  EXPECT_EQ(all.NumRoTimes(), 0);
}

TEST(FreeTimesTest, Examples) {
  const ModelParams p = ModelParams::Create(9, 1, 1, {0}, 3);
  const FreeTimes free = ComputeFreeTimes(p, 5);
  EXPECT_EQ(free.times, (std::vector<int64_t>{4, 5}));
  EXPECT_EQ(free.ro_count, 2);

  const ModelParams none = ModelParams::Create(9, 1, 0, {}, 3);
  EXPECT_EQ(ComputeFreeTimes(none, 4).times,
            (std::vector<int64_t>{1, 2, 3, 4}));
}

TEST(FreeTimesTest, AtLeastHalfFreeAfterTwoGammaEll) {
  Rng rng(3);
  for (int trial = 0; trial < 300; ++trial) {
    const auto n = static_cast<int64_t>(10 + rng.Below(200));
    const auto ell = static_cast<int64_t>(1 + rng.Below(10));
    const int64_t windows = (n + ell - 1) / ell;
    const auto gamma = static_cast<int64_t>(rng.Below(windows / 2 + 1));
    std::vector<int64_t> cover;
    while (static_cast<int64_t>(cover.size()) < gamma) {
      const auto w = static_cast<int64_t>(rng.Below(windows));
      if (std::find(cover.begin(), cover.end(), w) == cover.end()) {
        cover.push_back(w);
      }
    }
    const ModelParams p = ModelParams::Create(n, 1, gamma, cover, ell);
    for (int64_t t = std::max<int64_t>(1, 2 * gamma * ell); t <= n; ++t) {
      const FreeTimes free = ComputeFreeTimes(p, t);
      EXPECT_GE(2 * free.size(), t);
      EXPECT_EQ(free.ro_count, free.size());
    }
  }
}

TEST(OptRoTest, Examples) {
  const std::vector<Item> pool{{4, 1}, {3, 1}, {1, 1}};
  FractionalSolution sol = OptRo(pool, 2);
  EXPECT_DOUBLE_EQ(sol.total_value, 7);
  EXPECT_EQ(sol.fractions, (std::vector<double>{1, 1, 0}));
  sol = OptRo(pool, 2.5);
  EXPECT_DOUBLE_EQ(sol.total_value, 7.5);
  EXPECT_EQ(sol.fractions, (std::vector<double>{1, 1, 0.5}));
  EXPECT_EQ(OptRo(pool, 0).total_value, 0.0);
}

TEST(OptRoTest, MatchesEnumeration) {
  Rng rng(5);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::vector<Item> pool =
        testing::RandomItems(rng, 1 + rng.Below(12));
    const double k = rng.Uniform(0.0, 8.0);
    const FractionalSolution sol = OptRo(pool, k);
    EXPECT_NEAR(sol.total_value, testing::BruteForceKnapsack(pool, k), 1e-9);
    EXPECT_LE(sol.total_weight, k + 1e-9);
    double v = 0.0;
    for (size_t i = 0; i < pool.size(); ++i) {
      EXPECT_GE(sol.fractions[i], 0.0);
      EXPECT_LE(sol.fractions[i], 1.0);
      v += sol.fractions[i] * pool[i].value;
    }
    EXPECT_NEAR(v, sol.total_value, 1e-9);
  }
}

TEST(AlgoConstantsTest, Profiles) {
  const AlgoConstants paper = AlgoConstants::Paper();
  EXPECT_EQ(paper.a1, 601.0);
  EXPECT_DOUBLE_EQ(paper.a4, 2.0 * std::exp(6.0) * 4000.0);
  const AlgoConstants practical = AlgoConstants::Practical();
  EXPECT_EQ(practical.a1, 3.0);
  EXPECT_EQ(practical.a4, 6.0);
  EXPECT_THROW((AlgoConstants{2.0, 1.0, true}).Validate(), InvalidParameter);
  EXPECT_THROW((AlgoConstants{0.0, 1.0, true}).Validate(), InvalidParameter);
}

TEST(ScatteredCoverTest, SpreadsEvenly) {
  EXPECT_EQ(ScatteredCover(10, 2), (std::vector<int64_t>{2, 7}));
  EXPECT_EQ(FrontCover(3), (std::vector<int64_t>{0, 1, 2}));
  const std::vector<int64_t> c = ScatteredCover(7, 7);
  EXPECT_EQ(c.size(), 7u);
}

}  // namespace
}  // namespace baro
