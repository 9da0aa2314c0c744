#pragma once

#include "core.hpp"
#include "rng.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string_view>
#include <vector>

namespace rsdlab {

enum class Family { BernoulliWelfare, WorstCaseMetricLine, RandomValue, RandomMetricLine, RandomAbstract };

inline const char* to_string(Family f) {
  switch (f) {
    case Family::BernoulliWelfare: return "bernoulli";
    case Family::WorstCaseMetricLine: return "worst-case-line";
    case Family::RandomValue: return "random-value";
    case Family::RandomMetricLine: return "random-metric-line";
    case Family::RandomAbstract: return "random-abstract";
  }
  return "?";
}

inline std::optional<Family> family_from_string(std::string_view s) {
  for (Family f : {Family::BernoulliWelfare, Family::WorstCaseMetricLine, Family::RandomValue,
                   Family::RandomMetricLine, Family::RandomAbstract})
    if (s == to_string(f)) return f;
  return std::nullopt;
}

// Random values are integers in [0, value_resolution] divided by it; random
// line points are integers in [0, line_extent].
struct FamilySpec {
  Family family = Family::BernoulliWelfare;
  int n = 1;
  std::uint64_t seed = 0;
  std::uint64_t value_resolution = 1'000'000;
  std::uint64_t line_extent = 1'000;
};

// Function: generate
inline AssignmentInstance generate(const FamilySpec& spec) {
  const int n = spec.n;
  if (n < 1) throw std::invalid_argument("family size n must be at least 1");
  SplitMix64 rng(spec.seed);

  switch (spec.family) {
    case Family::BernoulliWelfare: {
      // Agent 1 values item 1 at 1; every other value is 0.
      RationalMatrix v(n, std::vector<Rational>(n, 0));
      v[0][0] = 1;
      return AssignmentInstance::with_values(std::move(v));
    }
    case Family::WorstCaseMetricLine: {
      // Agents at 1, 2, 4, ..., 2^(n-1); items at -1, 2, 4, ..., 2^(n-1).
      std::vector<Rational> agents(n), items(n);
      for (int i = 0; i < n; ++i) {
        agents[i] = Rational(BigInt(1) << i);
        items[i] = i == 0 ? Rational(-1) : agents[i];
      }
      return AssignmentInstance::on_line(std::move(agents), std::move(items));
    }
    case Family::RandomValue: {
      if (spec.value_resolution < 1) throw std::invalid_argument("value resolution must be positive");
      RationalMatrix v(n, std::vector<Rational>(n));
      for (auto& row : v)
        for (auto& x : row)
          x = Rational(BigInt(rng.below(spec.value_resolution + 1)), BigInt(spec.value_resolution));
      return AssignmentInstance::with_values(std::move(v));
    }
    case Family::RandomMetricLine: {
      std::vector<Rational> agents(n), items(n);
      for (auto& a : agents) a = Rational(BigInt(rng.below(spec.line_extent + 1)));
      for (auto& g : items) g = Rational(BigInt(rng.below(spec.line_extent + 1)));
      return AssignmentInstance::on_line(std::move(agents), std::move(items));
    }
    case Family::RandomAbstract: {
      std::vector<Ranking> rankings(n);
      for (auto& r : rankings) shuffle_identity(r, n, rng);
      return AssignmentInstance::with_rankings(std::move(rankings));
    }
  }
  throw std::invalid_argument("unknown family");
}

/// The adversarial order for the worst-case line family: the identity.
inline Ordering canonical_ordering(Family family, int n) {
  if (family != Family::WorstCaseMetricLine)
    throw std::invalid_argument("canonical ordering is defined for the worst-case line family only");
  if (n < 1) throw std::invalid_argument("n must be at least 1");
  return Ordering::identity(n);
}

}  // namespace rsdlab
