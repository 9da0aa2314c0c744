#include <gtest/gtest.h>

#include <rsdlab/generators.hpp>
#include <rsdlab/opt_solver.hpp>
#include <rsdlab/rng.hpp>

#include "oracles.hpp"

using namespace rsdlab;

TEST(SolveOpt, WorstCaseLineIsTwo) {
  for (int n = 2; n <= 14; ++n) {
    auto r = solve_opt(generate({Family::WorstCaseMetricLine, n}), Objective::Cost);
    EXPECT_EQ(r.objective_value, Rational(2)) << "n=" << n;
    EXPECT_EQ(r.matching.item_of(1), 1);
  }
}

TEST(SolveOpt, IdentityValues) {
  for (int n = 1; n <= 9; ++n) {
    RationalMatrix v(n, std::vector<Rational>(n, 0));
    for (int i = 0; i < n; ++i) v[i][i] = 1;
    auto r = solve_opt(AssignmentInstance::with_values(v), Objective::Welfare);
    EXPECT_EQ(r.objective_value, Rational(n));
    for (int a = 1; a <= n; ++a) EXPECT_EQ(r.matching.item_of(a), a);
  }
}

TEST(BruteForceOpt, WorkedExamples) {
  auto one = brute_force_opt(AssignmentInstance::with_values({{Rational(5, 3)}}), Objective::Welfare);
  EXPECT_EQ(one.objective_value, Rational(5, 3));
  EXPECT_EQ(one.matching.assign(), (std::vector<int>{1}));
  EXPECT_EQ(brute_force_opt(generate({Family::BernoulliWelfare, 5}), Objective::Welfare).objective_value, Rational(1));
  EXPECT_EQ(brute_force_opt(generate({Family::WorstCaseMetricLine, 3}), Objective::Cost).objective_value, Rational(2));
}

TEST(BruteForceOpt, LexicographicTieBreak) {
  // all matchings tie: the first in lexicographic order wins
  RationalMatrix c(4, std::vector<Rational>(4, 1));
  EXPECT_EQ(brute_force_opt(AssignmentInstance::with_costs(c), Objective::Cost).matching.assign(),
            (std::vector<int>{1, 2, 3, 4}));
  EXPECT_EQ(brute_force_opt(generate({Family::BernoulliWelfare, 3}), Objective::Welfare).matching.assign(),
            (std::vector<int>{1, 2, 3}));
}

TEST(BruteForceOpt, RefusesAboveCap) {
  EXPECT_THROW(brute_force_opt(generate({Family::BernoulliWelfare, 8}), Objective::Welfare), std::invalid_argument);
  EXPECT_NO_THROW(brute_force_opt(generate({Family::BernoulliWelfare, 8}), Objective::Welfare, 8));
}

TEST(SolveOpt, ObjectiveMismatch) {
  EXPECT_THROW(solve_opt(generate({Family::BernoulliWelfare, 3}), Objective::Cost), std::invalid_argument);
  EXPECT_THROW(solve_opt(generate({Family::RandomAbstract, 3, 2}), Objective::Welfare), std::invalid_argument);
}

TEST(SolveOpt, MatchesBruteForceAndNaive) {
  for (std::uint64_t seed = 0; seed < 150; ++seed) {
    const int n = 1 + static_cast<int>(seed % 7);
    auto V = generate({Family::RandomValue, n, seed});
    auto fast = solve_opt(V, Objective::Welfare);
    EXPECT_EQ(fast.objective_value, brute_force_opt(V, Objective::Welfare).objective_value);
    EXPECT_EQ(fast.objective_value, oracle::naive_opt(V, true));
    EXPECT_EQ(fast.objective_value, evaluate(V, fast.matching, Objective::Welfare));

    auto C = generate({Family::RandomMetricLine, n, seed});
    auto fc = solve_opt(C, Objective::Cost);
    EXPECT_EQ(fc.objective_value, brute_force_opt(C, Objective::Cost).objective_value);
    EXPECT_EQ(fc.objective_value, oracle::naive_opt(C, false));
    EXPECT_EQ(fc.objective_value, evaluate(C, fc.matching, Objective::Cost));
  }
}

TEST(SolveOpt, FractionalAndHugeEntries) {
  const BigInt big = BigInt(1) << 90;
  RationalMatrix v = {{Rational(1, 3), Rational(big), Rational(2, 7)},
                      {Rational(big + 1), Rational(1, 2), Rational(0)},
                      {Rational(5), Rational(big - 3), Rational(11, 13)}};
  auto I = AssignmentInstance::with_values(v);
  EXPECT_EQ(solve_opt(I, Objective::Welfare).objective_value, oracle::naive_opt(I, true));
  auto C = AssignmentInstance::with_costs({{Rational(big), Rational(big + 1)}, {Rational(big + 1), Rational(big)}});
  EXPECT_EQ(solve_opt(C, Objective::Cost).objective_value, Rational(2 * big));
}

TEST(SolveOpt, DominatesEveryMatching) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    auto V = generate({Family::RandomValue, 6, seed});
    auto C = generate({Family::RandomMetricLine, 6, seed});
    Rational ov = solve_opt(V, Objective::Welfare).objective_value;
    Rational oc = solve_opt(C, Objective::Cost).objective_value;
    SplitMix64 rng(seed);
    for (int t = 0; t < 20; ++t) {
      std::vector<int> perm;
      shuffle_identity(perm, 6, rng);
      Matching M(perm);
      EXPECT_GE(ov, evaluate(V, M, Objective::Welfare));
      EXPECT_LE(oc, evaluate(C, M, Objective::Cost));
    }
  }
}

TEST(SolveOpt, ReducedInstanceClaim) {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    const int n = 2 + static_cast<int>(seed % 6);
    auto I = generate({Family::RandomMetricLine, n, seed});
    Rational opt = solve_opt(I, Objective::Cost).objective_value;
    for (int a = 1; a <= n; ++a) {
      auto red = remove_agent_best(I, a);
      Rational best = I.payoff(a, red.removed_item);
      EXPECT_LE(solve_opt(red.instance, Objective::Cost).objective_value, opt + best);
    }
  }
}
