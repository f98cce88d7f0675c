#include <gtest/gtest.h>

#include "oracles.hpp"
#include "roughsel/roughset.hpp"

using namespace roughsel;

namespace {

DecisionTable t1() { return DecisionTable::from_codes({{0, 0}, {0, 1}, {1, 0}, {1, 1}}, {0, 0, 1, 1}); }
DecisionTable t2() { return DecisionTable::from_codes({{0}, {0}, {1}, {1}}, {0, 1, 1, 1}); }
DecisionTable xor_table() { return DecisionTable::from_codes({{0, 0}, {0, 1}, {1, 0}, {1, 1}}, {0, 1, 1, 0}); }

Partition blocks(std::vector<IndexSet> b, std::size_t n) { return Partition{std::move(b), n}; }

const std::vector<std::size_t> kNone;

}  // namespace

TEST(Approximation, LowerTakesContainedBlocks) {
  const auto p = blocks({{0, 1}, {2, 3}}, 4);
  EXPECT_EQ(lower_approx(p, {0, 1, 2}), (IndexSet{0, 1}));
  EXPECT_EQ(lower_approx(p, {0, 1, 2, 3}), (IndexSet{0, 1, 2, 3}));
  EXPECT_TRUE(lower_approx(p, {}).empty());
}

TEST(Approximation, UpperTakesIntersectingBlocks) {
  const auto p = blocks({{0, 1}, {2, 3}}, 4);
  EXPECT_EQ(upper_approx(p, {0, 1, 2}), (IndexSet{0, 1, 2, 3}));
  EXPECT_TRUE(upper_approx(p, {}).empty());
  const auto singletons = blocks({{0}, {1}, {2}, {3}}, 4);
  EXPECT_EQ(upper_approx(singletons, {1, 3}), (IndexSet{1, 3}));
}

TEST(Approximation, TargetOutsideUniverseThrows) {
  EXPECT_ANY_THROW(lower_approx(blocks({{0, 1}}, 2), {5}));
}

TEST(Regions, WorkedExample) {
  const auto r = regions(blocks({{0, 1}, {2, 3}}, 4), blocks({{0}, {1, 2, 3}}, 4));
  EXPECT_EQ(r.positive, (IndexSet{2, 3}));
  EXPECT_EQ(r.boundary, (IndexSet{0, 1}));
  EXPECT_TRUE(r.negative.empty());
}

TEST(Regions, SelfDependencyAndTrivialDecision) {
  const auto p = blocks({{0, 2}, {1}, {3}}, 4);
  auto r = regions(p, p);
  EXPECT_EQ(r.positive, (IndexSet{0, 1, 2, 3}));
  EXPECT_TRUE(r.boundary.empty());
  EXPECT_TRUE(r.negative.empty());
  r = regions(p, blocks({{0, 1, 2, 3}}, 4));
  EXPECT_EQ(r.positive, (IndexSet{0, 1, 2, 3}));
}

TEST(Regions, UniverseMismatchThrows) {
  EXPECT_THROW(regions(blocks({{0, 1}}, 2), blocks({{0, 1, 2}}, 3)), std::invalid_argument);
}

TEST(Partition, BlocksOrderedBySmallestMember) {
  const auto t = DecisionTable::from_codes({{1}, {0}, {1}, {2}}, {0, 0, 0, 0});
  const std::vector<std::size_t> a{0};
  EXPECT_EQ(partition_by(t, a), blocks({{0, 2}, {1}, {3}}, 4));
  EXPECT_EQ(partition_by(t, kNone), blocks({{0, 1, 2, 3}}, 4));
}

TEST(Gamma, WorkedExamples) {
  const std::vector<std::size_t> a{0};
  EXPECT_EQ(gamma(DecisionTable::from_codes({{0}, {0}, {1}, {1}}, {0, 0, 1, 1}), a), 1.0);
  EXPECT_EQ(gamma(t2(), a), 0.5);
  EXPECT_EQ(gamma(t2(), kNone), 0.0);
}

TEST(QuickReduct, T1SelectsA) {
  const auto r = quick_reduct(t1());
  EXPECT_EQ(r.selected, (std::vector<std::size_t>{0}));
  ASSERT_EQ(r.trace.size(), 1u);
  EXPECT_EQ(r.trace[0].gamma.value(), 1.0);
  EXPECT_TRUE(r.reached_full);
}

TEST(QuickReduct, ConstantDecisionGivesEmptyReduct) {
  const auto r = quick_reduct(DecisionTable::from_codes({{0, 1}, {1, 0}, {2, 2}}, {0, 0, 0}));
  EXPECT_TRUE(r.selected.empty());
  EXPECT_EQ(r.gamma_full.value(), 1.0);
  EXPECT_TRUE(r.reached_full);
}

TEST(QuickReduct, XorNeedsBoth) {
  const auto r = quick_reduct(xor_table());
  EXPECT_EQ(r.selected, (std::vector<std::size_t>{0, 1}));
  EXPECT_TRUE(r.reached_full);
  // first step gains nothing, so the stall guard adds the lowest index
  EXPECT_TRUE(r.trace[0].forced);
  EXPECT_FALSE(r.trace[1].forced);
}

TEST(ExhaustiveReducts, WorkedExamples) {
  EXPECT_EQ(exhaustive_reducts(t1()), (std::vector<AttributeSet>{{0}}));
  EXPECT_EQ(exhaustive_reducts(xor_table()), (std::vector<AttributeSet>{{0, 1}}));
  EXPECT_EQ(exhaustive_reducts(t2()), (std::vector<AttributeSet>{{0}}));
}

TEST(ExhaustiveReducts, CapExceededThrows) {
  std::vector<std::vector<Code>> rows(2, std::vector<Code>(5, 0));
  EXPECT_ANY_THROW(exhaustive_reducts(DecisionTable::from_codes(rows, {0, 1}), 4));
}

TEST(Core, Intersection) {
  EXPECT_EQ(core_attributes({{0}}), (AttributeSet{0}));
  EXPECT_EQ(core_attributes({{0, 1}, {0, 2}}), (AttributeSet{0}));
  EXPECT_TRUE(core_attributes({{0}, {1}}).empty());
  EXPECT_ANY_THROW(core_attributes({}));
}

TEST(MinimalReducts, SmallestOnly) {
  EXPECT_EQ(minimal_reducts({{0}, {1}, {0, 2}}), (std::vector<AttributeSet>{{0}, {1}}));
}

// ---- properties against the brute-force oracle -----------------------------

class RandomTables : public ::testing::TestWithParam<int> {};

TEST_P(RandomTables, GammaMatchesOracleOnEverySubset) {
  std::mt19937_64 rng(GetParam());
  const auto t = oracle::random_table(rng, 6, 20);
  for (std::uint32_t mask = 0; mask < (1u << t.num_attributes()); ++mask) {
    const auto s = oracle::mask_to_set(mask);
    const auto expect = oracle::positive_count(t, s);
    EXPECT_EQ(dependency_via_regions(t, s).positive, expect);
    EXPECT_EQ(dependency(t, s, Exec::serial).positive, expect);
    EXPECT_EQ(dependency(t, s, Exec::parallel).positive, expect);
  }
}

TEST_P(RandomTables, ApproximationsBracketTarget) {
  std::mt19937_64 rng(GetParam() + 1000);
  const auto t = oracle::random_table(rng);
  const std::vector<std::size_t> attrs{0};
  const auto p = partition_by(t, attrs);
  IndexSet target;
  for (std::size_t i = 0; i < t.universe_size(); ++i)
    if (rng() % 2) target.push_back(i);
  const auto lo = lower_approx(p, target), up = upper_approx(p, target);
  EXPECT_TRUE(std::includes(target.begin(), target.end(), lo.begin(), lo.end()));
  EXPECT_TRUE(std::includes(up.begin(), up.end(), target.begin(), target.end()));
  const auto r = regions(p, decision_partition(t));
  EXPECT_TRUE(r.negative.empty());
}

TEST_P(RandomTables, GammaMonotoneUnderRefinement) {
  std::mt19937_64 rng(GetParam() + 2000);
  const auto t = oracle::random_table(rng);
  std::vector<std::size_t> s;
  Dependency prev = dependency(t, s);
  for (std::size_t a = 0; a < t.num_attributes(); ++a) {
    s.push_back(a);
    const auto d = dependency(t, s);
    EXPECT_LE(prev, d);
    EXPECT_EQ(d.universe, t.universe_size());
    prev = d;
  }
}

TEST_P(RandomTables, QuickReductTraceAndReducts) {
  std::mt19937_64 rng(GetParam() + 3000);
  const auto t = oracle::random_table(rng);
  const auto r = quick_reduct(t);
  Dependency last{0, t.universe_size()};
  std::vector<std::size_t> s;
  for (std::size_t k = 0; k < r.trace.size(); ++k) {
    s.push_back(r.trace[k].attribute);
    EXPECT_EQ(r.trace[k].gamma.positive, oracle::positive_count(t, s));
    if (!r.trace[k].forced) EXPECT_LT(last, r.trace[k].gamma);
    last = r.trace[k].gamma;
  }
  EXPECT_EQ(s, r.selected);
  if (r.reached_full) EXPECT_EQ(dependency(t, r.selected), r.gamma_full);

  const auto reducts = exhaustive_reducts(t);
  auto expect = oracle::all_reducts(t);
  std::sort(expect.begin(), expect.end(), [](const auto& a, const auto& b) {
    return a.size() != b.size() ? a.size() < b.size() : a < b;
  });
  EXPECT_EQ(reducts, expect);
  // greedy can overshoot but never beat the minimum
  EXPECT_GE(r.selected.size(), minimal_reducts(reducts).front().size());
}

INSTANTIATE_TEST_SUITE_P(Seeds, RandomTables, ::testing::Range(0, 40));
