#pragma once

// Test-only reference implementations. Deliberately naive and independent of
// the library's algorithms: no preference caching, no prefix sharing, plain
// rational arithmetic.

#include <rsdlab/core.hpp>

#include <algorithm>
#include <numeric>
#include <vector>

namespace rsdlab::oracle {

// SD straight from the definition: scan the whole row for the best free item.
inline std::vector<int> naive_sd(const AssignmentInstance& I, const std::vector<int>& order) {
  const int n = I.n();
  std::vector<int> item_of(n, -1);
  std::vector<bool> free(n, true);
  for (int who : order) {
    const int a = who - 1;
    int best = -1;
    for (int g = 0; g < n; ++g) {
      if (!free[g]) continue;
      if (best < 0) {
        best = g;
        continue;
      }
      bool better = false;
      if (I.setting() == Setting::Abstract) {
        const auto& r = I.rankings()[a];
        better = std::find(r.begin(), r.end(), g + 1) < std::find(r.begin(), r.end(), best + 1);
      } else if (I.setting() == Setting::Value) {
        better = I.matrix()[a][g] > I.matrix()[a][best];
      } else {
        better = I.matrix()[a][g] < I.matrix()[a][best];
      }
      if (better) best = g;
    }
    free[best] = false;
    item_of[a] = best;
  }
  return item_of;
}

struct NaiveSummary {
  std::vector<std::vector<long>> L;
  Rational mean, second_moment;
};

// std::next_permutation over all orderings, rational accumulation.
inline NaiveSummary naive_enumerate(const AssignmentInstance& I) {
  const int n = I.n();
  NaiveSummary s;
  s.L.assign(n, std::vector<long>(n, 0));
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 1);
  long count = 0;
  Rational sum = 0, sum_sq = 0;
  do {
    auto item_of = naive_sd(I, order);
    Rational obj = 0;
    for (int a = 0; a < n; ++a) {
      ++s.L[a][item_of[a]];
      if (I.has_cardinal_payoff()) obj += I.matrix()[a][item_of[a]];
    }
    sum += obj;
    sum_sq += obj * obj;
    ++count;
  } while (std::next_permutation(order.begin(), order.end()));
  s.mean = sum / count;
  s.second_moment = sum_sq / count;
  return s;
}

// Binomial coefficient by the multiplicative formula, exact.
inline BigInt choose(long k, long x) {
  BigInt c = 1;
  for (long t = 1; t <= x; ++t) c = c * (k - x + t) / t;
  return c;
}

// Pr over X ~ Bin(k, 1/n) of a predicate on X, term by term in rationals.
template <typename Pred>
Rational naive_binomial(int n, long k, Pred pred) {
  Rational p(1, n), total = 0;
  for (long x = 0; x <= k; ++x) {
    if (!pred(Rational(x))) continue;
    Rational term = Rational(choose(k, x));
    for (long t = 0; t < x; ++t) term *= p;
    for (long t = 0; t < k - x; ++t) term *= (1 - p);
    total += term;
  }
  return total;
}

// Minimum over all n! matchings, rational sums.
inline Rational naive_opt(const AssignmentInstance& I, bool maximize) {
  const int n = I.n();
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  bool first = true;
  Rational best;
  do {
    Rational v = 0;
    for (int a = 0; a < n; ++a) v += I.matrix()[a][perm[a]];
    if (first || (maximize ? v > best : v < best)) best = v;
    first = false;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

}  // namespace rsdlab::oracle
