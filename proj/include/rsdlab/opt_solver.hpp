#pragma once

#include "core.hpp"
#include "sd_engine.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace rsdlab {

struct OptResult {
  Matching matching;
  Rational objective_value;
};

// Function: min_cost_assignment
//
// Kuhn-Munkres with row/column potentials and shortest augmenting paths,
// O(n^3). Works for any exactly-ordered arithmetic type T (integers,
// rationals, big integers). Returns the column assigned to each row, 0-based.
template <typename T>
std::vector<int> min_cost_assignment(const std::vector<std::vector<T>>& cost) {
  const int n = static_cast<int>(cost.size());
  for (const auto& row : cost)
    if (static_cast<int>(row.size()) != n) throw std::invalid_argument("cost matrix must be square");
  if (n == 0) return {};

  // 1-based internally; column 0 is the virtual root of each augmenting tree.
  std::vector<T> u(n + 1, T(0)), v(n + 1, T(0));
  std::vector<int> owner(n + 1, 0), way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    owner[0] = i;
    int j0 = 0;
    std::vector<T> minv(n + 1, T(0));
    std::vector<char> seen(n + 1, 0), minv_set(n + 1, 0);
    do {
      seen[j0] = 1;
      const int i0 = owner[j0];
      T delta(0);
      int j1 = -1;
      for (int j = 1; j <= n; ++j) {
        if (seen[j]) continue;
        T reduced = cost[i0 - 1][j - 1] - u[i0] - v[j];
        if (!minv_set[j] || reduced < minv[j]) {
          minv[j] = reduced;
          minv_set[j] = 1;
          way[j] = j0;
        }
        if (j1 < 0 || minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (seen[j]) {
          u[owner[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (owner[j0] != 0);
    do {
      const int j1 = way[j0];
      owner[j0] = owner[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  std::vector<int> col_of(n);
  for (int j = 1; j <= n; ++j) col_of[owner[j] - 1] = j - 1;
  return col_of;
}

// Function: solve_opt
//
// Maximum welfare or minimum cost perfect matching, exact. Payoffs are
// brought to integers over their common denominator; welfare is minimized as
// (max value - value), the shift is dropped by re-evaluating the matching.
inline OptResult solve_opt(const PreparedInstance& P, Objective obj) {
  require_objective(P.instance(), obj);
  const int n = P.n();
  std::vector<std::vector<BigInt>> cost(n, std::vector<BigInt>(n));
  BigInt top = 0;
  for (int a = 0; a < n; ++a)
    for (int g = 0; g < n; ++g) top = std::max(top, P.scaled(a, g));
  for (int a = 0; a < n; ++a)
    for (int g = 0; g < n; ++g)
      cost[a][g] = obj == Objective::Cost ? P.scaled(a, g) : BigInt(top - P.scaled(a, g));

  auto cols = min_cost_assignment(cost);
  for (int& c : cols) ++c;
  Matching M(std::move(cols));
  Rational value = evaluate(P.instance(), M, obj);
  return OptResult{std::move(M), std::move(value)};
}

inline OptResult solve_opt(const AssignmentInstance& I, Objective obj) { return solve_opt(PreparedInstance(I), obj); }

inline constexpr int kDefaultBruteForceCap = 7;

// Function: brute_force_opt
//
// Test oracle: scans all n! matchings in lexicographic order of the
// assignment vector and keeps the first strictly better one.
inline OptResult brute_force_opt(const PreparedInstance& P, Objective obj, int cap = kDefaultBruteForceCap) {
  require_objective(P.instance(), obj);
  const int n = P.n();
  if (n > cap)
    throw std::invalid_argument("brute force refused: n=" + std::to_string(n) + " exceeds cap " + std::to_string(cap));

  std::vector<int> assign(n);
  std::iota(assign.begin(), assign.end(), 0);
  std::vector<int> best = assign;
  BigInt best_value;
  bool first = true;
  do {
    BigInt value = 0;
    for (int a = 0; a < n; ++a) value += P.scaled(a, assign[a]);
    const bool better = obj == Objective::Welfare ? value > best_value : value < best_value;
    if (first || better) {
      best = assign;
      best_value = value;
      first = false;
    }
  } while (std::next_permutation(assign.begin(), assign.end()));

  for (int& g : best) ++g;
  return OptResult{Matching(std::move(best)), Rational(best_value, P.scale())};
}

inline OptResult brute_force_opt(const AssignmentInstance& I, Objective obj, int cap = kDefaultBruteForceCap) {
  return brute_force_opt(PreparedInstance(I), obj, cap);
}

}  // namespace rsdlab
