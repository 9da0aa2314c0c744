#include <gtest/gtest.h>

#include <rsdlab/generators.hpp>
#include <rsdlab/rng.hpp>
#include <rsdlab/sd_engine.hpp>

#include "oracles.hpp"

#include <map>
#include <numeric>

using namespace rsdlab;

TEST(SerialDictatorship, WorstCaseIdentity) {
  auto I = generate({Family::WorstCaseMetricLine, 3});
  auto M = serial_dictatorship(I, Ordering::identity(3));
  // agent 1 at 1 takes the item at 2, agent 2 at 2 the item at 4, agent 3 at 4 the item at -1
  EXPECT_EQ(M.assign(), (std::vector<int>{2, 3, 1}));
  EXPECT_EQ(evaluate(I, M, Objective::Cost), Rational(1 + 2 + 5));
}

TEST(SerialDictatorship, WorstCaseIdentityCostsTwoToTheN) {
  for (int n = 1; n <= 12; ++n) {
    auto I = generate({Family::WorstCaseMetricLine, n});
    auto M = serial_dictatorship(I, canonical_ordering(Family::WorstCaseMetricLine, n));
    EXPECT_EQ(evaluate(I, M, Objective::Cost), Rational(BigInt(1) << n)) << "n=" << n;
  }
}

TEST(SerialDictatorship, BernoulliTieBreak) {
  auto I = generate({Family::BernoulliWelfare, 3});
  auto M = serial_dictatorship(I, Ordering({2, 1, 3}));
  EXPECT_EQ(M.assign(), (std::vector<int>{2, 1, 3}));
  EXPECT_EQ(evaluate(I, M, Objective::Welfare), Rational(0));
  auto first = serial_dictatorship(I, Ordering({1, 2, 3}));
  EXPECT_EQ(evaluate(I, first, Objective::Welfare), Rational(1));
}

TEST(SerialDictatorship, MatchesNaiveOnRandomInstances) {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    for (Family f : {Family::RandomValue, Family::RandomMetricLine, Family::RandomAbstract}) {
      const int n = 1 + static_cast<int>(seed % 8);
      auto I = generate({f, n, seed});
      PreparedInstance P(I);
      SplitMix64 rng(seed * 7 + 1);
      for (int rep = 0; rep < 5; ++rep) {
        auto order = random_ordering(rng, n);
        auto M = serial_dictatorship(P, order);
        auto naive = oracle::naive_sd(I, order.seq());
        for (int a = 0; a < n; ++a) ASSERT_EQ(M.assign()[a], naive[a] + 1);
      }
    }
  }
}

TEST(SerialDictatorship, OutputIsAPerfectMatching) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    auto I = generate({Family::RandomAbstract, 9, seed});
    SplitMix64 rng(seed);
    auto M = serial_dictatorship(I, random_ordering(rng, 9));
    EXPECT_NO_THROW(Matching(M.assign()));
  }
}

TEST(SerialDictatorship, RejectsInvalidInput) {
  auto bad = AssignmentInstance::with_costs({{Rational(1), Rational(10)}, {Rational(1), Rational(1)}});
  EXPECT_THROW(serial_dictatorship(bad, Ordering::identity(2)), std::invalid_argument);
  auto I = generate({Family::BernoulliWelfare, 3});
  EXPECT_THROW(serial_dictatorship(I, Ordering::identity(2)), std::invalid_argument);
}

TEST(SerialDictatorship, RunObjectiveAgreesWithEvaluate) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    auto I = generate({Family::RandomValue, 6, seed});
    PreparedInstance P(I);
    SplitMix64 rng(seed);
    auto order = random_ordering(rng, 6);
    std::vector<char> taken;
    double fast = P.run_objective(order.seq(), taken);
    Rational exact = run_sd(P, order, Objective::Welfare).objective_value;
    EXPECT_NEAR(fast, to_double(exact), 1e-12);
  }
}

TEST(Scaling, ScaledPayoffsAreExact) {
  auto I = AssignmentInstance::with_values(
      {{Rational(1, 3), Rational(1, 4)}, {Rational(5, 6), Rational(0)}});
  PreparedInstance P(I);
  EXPECT_EQ(P.scale(), BigInt(12));
  for (int a = 0; a < 2; ++a)
    for (int g = 0; g < 2; ++g) EXPECT_EQ(Rational(P.scaled(a, g), P.scale()), I.matrix()[a][g]);
}

TEST(RandomOrdering, UniformOverPermutations) {
  // 60,000 draws of n = 3: each ordering should appear with frequency 1/6 +- 0.01
  SplitMix64 rng(20240501);
  std::map<std::vector<int>, long> counts;
  const long draws = 60000;
  for (long t = 0; t < draws; ++t) ++counts[random_ordering(rng, 3).seq()];
  ASSERT_EQ(counts.size(), 6u);
  for (const auto& [perm, c] : counts) EXPECT_NEAR(static_cast<double>(c) / draws, 1.0 / 6.0, 0.01);
}

TEST(RandomOrdering, Reproducible) {
  SplitMix64 a(99), b(99);
  for (int t = 0; t < 20; ++t) EXPECT_EQ(random_ordering(a, 7).seq(), random_ordering(b, 7).seq());
}

TEST(Rng, BelowStaysInRange) {
  SplitMix64 rng(5);
  for (std::uint64_t bound : {1ull, 2ull, 3ull, 7ull, 1000ull, (1ull << 63) + 5})
    for (int t = 0; t < 1000; ++t) ASSERT_LT(rng.below(bound), bound);
}

TEST(Rng, SubstreamsDiffer) {
  EXPECT_NE(substream_seed(1, 0, 0), substream_seed(1, 0, 1));
  EXPECT_NE(substream_seed(1, 0, 0), substream_seed(1, 1, 0));
  EXPECT_NE(substream_seed(1, 0, 0), substream_seed(2, 0, 0));
  EXPECT_EQ(substream_seed(7, 3, 11), substream_seed(7, 3, 11));
}

TEST(SerialDictatorship, EachAgentTakesItsBestRemaining) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    auto I = generate({Family::RandomValue, 7, seed});
    SplitMix64 rng(seed + 100);
    auto order = random_ordering(rng, 7);
    auto M = serial_dictatorship(I, order);
    std::vector<bool> gone(8, false);
    for (int who : order.seq()) {
      const auto ranking = derive_preferences(I, who);
      const int got = M.item_of(who);
      for (int g : ranking) {
        if (g == got) break;
        EXPECT_TRUE(gone[g]) << "agent " << who << " skipped free item " << g;
      }
      gone[got] = true;
    }
  }
}

TEST(SerialDictatorship, MetricCostAtMostTwoToTheNTimesOpt) {
  for (std::uint64_t seed = 0; seed < 12; ++seed) {
    const int n = 2 + static_cast<int>(seed % 6);
    auto I = generate({Family::RandomMetricLine, n, seed});
    PreparedInstance P(I);
    const Rational bound = Rational(BigInt(1) << n) * oracle::naive_opt(I, false);
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 1);
    do {
      ASSERT_LE(run_sd(P, Ordering(order), Objective::Cost).objective_value, bound);
    } while (std::next_permutation(order.begin(), order.end()));
  }
}

TEST(Evaluate, SumsLookedUpEntries) {
  auto I = generate({Family::RandomValue, 4, 8});
  Matching M({3, 1, 4, 2});
  EXPECT_EQ(evaluate(I, M, Objective::Welfare),
            I.matrix()[0][2] + I.matrix()[1][0] + I.matrix()[2][3] + I.matrix()[3][1]);
  RationalMatrix zero(3, std::vector<Rational>(3, 0));
  EXPECT_EQ(evaluate(AssignmentInstance::with_values(zero), Matching({2, 3, 1}), Objective::Welfare), Rational(0));
  EXPECT_THROW(evaluate(I, M, Objective::Cost), std::invalid_argument);
}

TEST(SerialDictatorship, SingleAgent) {
  auto I = AssignmentInstance::with_values({{Rational(3)}});
  EXPECT_EQ(serial_dictatorship(I, Ordering::identity(1)).assign(), (std::vector<int>{1}));
  SplitMix64 rng(1);
  EXPECT_EQ(random_ordering(rng, 1).seq(), (std::vector<int>{1}));
}
