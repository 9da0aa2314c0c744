#include <gtest/gtest.h>

#include <rsdlab/generators.hpp>
#include <rsdlab/hardness.hpp>

#include "oracles.hpp"

#include <set>

using namespace rsdlab;

namespace {

AssignmentInstance shared_top() { return AssignmentInstance::with_rankings({{1, 2}, {1, 2}}); }

// Sum of L[i][j] placed at its block, computed from the naive enumeration.
BigInt expected_total(const AssignmentInstance& source, Setting setting) {
  const int n = source.n();
  auto naive = oracle::naive_enumerate(source);
  BigInt total = 0;
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j) {
      const long count = naive.L[i - 1][source.rankings()[i - 1][j - 1] - 1];
      total += BigInt(count) << static_cast<unsigned>(block_offset(n, setting, i, j));
    }
  if (setting == Setting::Metric)
    total += (BigInt(n) * factorial(n)) << (static_cast<unsigned>(n) * n * block_bits(n));
  return total;
}

}  // namespace

TEST(BlockBits, BitLengthOfFactorial) {
  EXPECT_EQ(block_bits(1), 1u);
  EXPECT_EQ(block_bits(2), 2u);
  EXPECT_EQ(block_bits(3), 3u);  // 6 -> 110
  EXPECT_EQ(block_bits(4), 5u);  // 24 -> 11000
  for (int n = 1; n <= 20; ++n) {
    const BigInt nf = factorial(n);
    EXPECT_GT(BigInt(1) << block_bits(n), nf);
    EXPECT_LE(BigInt(1) << (block_bits(n) - 1), nf);
  }
}

TEST(BlockOffset, DisjointBlocks) {
  for (int n = 1; n <= 12; ++n)
    for (Setting s : {Setting::Value, Setting::Metric}) {
      std::set<std::uint64_t> seen;
      const std::uint64_t q = block_bits(n);
      for (int i = 1; i <= n; ++i)
        for (int j = 1; j <= n; ++j) {
          const auto off = block_offset(n, s, i, j);
          EXPECT_EQ(off % q, 0u);
          EXPECT_LT(off, static_cast<std::uint64_t>(n) * n * q);
          EXPECT_TRUE(seen.insert(off).second) << "n=" << n << " i=" << i << " j=" << j;
        }
    }
}

TEST(BuildReduction, ValueWorkedExample) {
  auto built = build_reduction(shared_top(), Setting::Value);
  EXPECT_EQ(built.setting(), Setting::Value);
  EXPECT_EQ(built.matrix(), (RationalMatrix{{4, 1}, {64, 16}}));
}

TEST(BuildReduction, MetricWorkedExample) {
  auto built = build_reduction(shared_top(), Setting::Metric);
  EXPECT_EQ(built.setting(), Setting::Metric);
  EXPECT_EQ(built.matrix(), (RationalMatrix{{257, 260}, {272, 320}}));
  EXPECT_TRUE(validate(built).ok());
}

TEST(BuildReduction, PlacesEntriesByRank) {
  // agent 1 prefers item 2: its rank-1 value lands in column 2
  auto built = build_reduction(AssignmentInstance::with_rankings({{2, 1}, {1, 2}}), Setting::Value);
  EXPECT_EQ(built.matrix(), (RationalMatrix{{1, 4}, {64, 16}}));
}

TEST(BuildReduction, PreferencesRoundTrip) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const int n = 1 + static_cast<int>(seed % 4);
    auto src = generate({Family::RandomAbstract, n, seed});
    for (Setting s : {Setting::Value, Setting::Metric}) {
      auto built = build_reduction(src, s);
      for (int a = 1; a <= n; ++a) EXPECT_EQ(derive_preferences(built, a), src.rankings()[a - 1]);
    }
  }
}

TEST(BuildReduction, MetricEntriesWithinFactorTwo) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const int n = 1 + static_cast<int>(seed % 6);
    auto built = build_reduction(generate({Family::RandomAbstract, n, seed}), Setting::Metric);
    Rational lo = built.matrix()[0][0], hi = lo;
    for (const auto& row : built.matrix())
      for (const auto& x : row) {
        lo = std::min(lo, x);
        hi = std::max(hi, x);
      }
    EXPECT_LT(hi, 2 * lo);
    EXPECT_TRUE(validate(built).ok());
  }
}

TEST(BuildReduction, RejectsNonAbstractSource) {
  EXPECT_THROW(build_reduction(generate({Family::BernoulliWelfare, 2}), Setting::Value), std::invalid_argument);
  EXPECT_THROW(build_reduction(shared_top(), Setting::Abstract), std::invalid_argument);
  EXPECT_THROW(build_reduction(AssignmentInstance::with_rankings({{1, 1}, {1, 2}}), Setting::Value),
               std::invalid_argument);
}

TEST(ScaledTotal, WorkedExamples) {
  EXPECT_EQ(exact_scaled_total(build_reduction(shared_top(), Setting::Value), Objective::Welfare), BigInt(85));
  EXPECT_EQ(exact_scaled_total(build_reduction(shared_top(), Setting::Metric), Objective::Cost), BigInt(1109));
  auto single = AssignmentInstance::with_rankings({{1}});
  EXPECT_EQ(exact_scaled_total(build_reduction(single, Setting::Value), Objective::Welfare), BigInt(1));
  EXPECT_EQ(exact_scaled_total(build_reduction(single, Setting::Metric), Objective::Cost), BigInt(3));
}

TEST(ScaledTotal, MatchesIndependentAssembly) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const int n = 1 + static_cast<int>(seed % 5);
    auto src = generate({Family::RandomAbstract, n, seed});
    EXPECT_EQ(exact_scaled_total(build_reduction(src, Setting::Value), Objective::Welfare),
              expected_total(src, Setting::Value));
    EXPECT_EQ(exact_scaled_total(build_reduction(src, Setting::Metric), Objective::Cost),
              expected_total(src, Setting::Metric));
  }
}

TEST(DecodeL, WorkedExamples) {
  auto v = decode_L(BigInt(85), 2, Setting::Value);
  EXPECT_EQ(v.L, (CountMatrix{{1, 1}, {1, 1}}));
  EXPECT_FALSE(v.top_block.has_value());

  auto m = decode_L(BigInt(1109), 2, Setting::Metric);
  EXPECT_EQ(m.L, (CountMatrix{{1, 1}, {1, 1}}));
  ASSERT_TRUE(m.top_block.has_value());
  EXPECT_EQ(*m.top_block, BigInt(4));

  EXPECT_EQ(decode_L(BigInt(0), 3, Setting::Value).L, (CountMatrix(3, std::vector<std::uint64_t>(3, 0))));
  EXPECT_THROW(decode_L(BigInt(-1), 2, Setting::Value), std::invalid_argument);
}

TEST(DecodeL, RoundTripAgainstOracle) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const int n = 2 + static_cast<int>(seed % 3);
    auto src = generate({Family::RandomAbstract, n, seed});
    auto naive = oracle::naive_enumerate(src);
    for (Setting s : {Setting::Value, Setting::Metric}) {
      auto art = run_reduction(src, s);
      EXPECT_TRUE(art.round_trip);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          EXPECT_EQ(art.decoded_L[i][j], static_cast<std::uint64_t>(naive.L[i][src.rankings()[i][j] - 1]));
      if (s == Setting::Metric) {
        ASSERT_TRUE(art.top_block.has_value());
        EXPECT_EQ(*art.top_block, BigInt(n) * factorial(n));
      } else {
        EXPECT_FALSE(art.top_block.has_value());
      }
    }
  }
}

TEST(DecodeL, TopBlockAtTwoIsFour) {
  auto art = run_reduction(shared_top(), Setting::Metric);
  EXPECT_EQ(art.scaled_total, BigInt(1109));
  EXPECT_EQ(*art.top_block, BigInt(4));
  EXPECT_EQ(art.q, 2u);
}

TEST(LotteryFromL, UniformAndCrossCheck) {
  auto P = lottery_from_L({{1, 1}, {1, 1}}, shared_top());
  for (const auto& row : P)
    for (const auto& p : row) EXPECT_EQ(p, Rational(1, 2));

  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto src = generate({Family::RandomAbstract, 3, seed});
    auto art = run_reduction(src, Setting::Value);
    auto lottery = lottery_from_L(art.decoded_L, src);
    auto exact = enumerate(src, std::nullopt);
    EXPECT_EQ(lottery, exact.P);
  }
}

TEST(LotteryFromL, CorruptedRow) {
  // row 2 sums to 1 = 2! - 1
  try {
    lottery_from_L({{1, 1}, {1, 0}}, shared_top());
    FAIL();
  } catch (const std::runtime_error& e) {
    EXPECT_NE(std::string(e.what()).find("corrupted decode"), std::string::npos);
  }
}
