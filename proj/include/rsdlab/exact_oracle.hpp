#pragma once

#include "core.hpp"
#include "parallel.hpp"
#include "sd_engine.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <cstdint>
#include <cstdlib>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace rsdlab {

inline constexpr int kDefaultOracleCap = 10;
// 20! is the largest factorial that fits the 64-bit lottery counts.
inline constexpr int kHardOracleCap = 20;

class CapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// RSDLAB_ORACLE_CAP if set and parseable, else `fallback`.
inline int oracle_cap_from_env(int fallback = kDefaultOracleCap) {
  const char* raw = std::getenv("RSDLAB_ORACLE_CAP");
  if (!raw || !*raw) return fallback;
  char* end = nullptr;
  long v = std::strtol(raw, &end, 10);
  if (*end != '\0' || v < 1) return fallback;
  return static_cast<int>(v);
}

using CountMatrix = std::vector<std::vector<std::uint64_t>>;

// Struct: ExactSummary
//
// L[i][g] counts the orderings under which agent i+1 receives item g+1, so
// P = L / n!. Moments are over a uniformly random ordering and only present
// for value and metric instances.
struct ExactSummary {
  int n = 0;
  BigInt orderings;  // n!
  CountMatrix L;
  RationalMatrix P;
  std::optional<Objective> objective;
  Rational total;  // sum of the objective over all n! orderings
  Rational mean;
  Rational second_moment;
  Rational variance;
};

struct EnumerateOptions {
  int cap = kDefaultOracleCap;
  int workers = 1;
};

namespace detail {

inline BigInt to_big(__int128 v) {
  const bool negative = v < 0;
  auto u = negative ? static_cast<unsigned __int128>(-(v + 1)) + 1 : static_cast<unsigned __int128>(v);
  BigInt r = static_cast<std::uint64_t>(u >> 64);
  r <<= 64;
  r += static_cast<std::uint64_t>(u);
  return negative ? BigInt(-r) : r;
}
inline BigInt to_big(const BigInt& v) { return v; }

// Depth-first walk over orderings in lexicographic order. Each internal node
// fixes the next dictator's pick, so SD work is shared between orderings with
// a common prefix; a pick at depth t is credited (n-t-1)! times in L.
template <typename Int, typename Wide>
class OrderingWalk {
 public:
  OrderingWalk(const PreparedInstance& P, const std::vector<Int>& table, const std::vector<std::uint64_t>& fact)
      : L(static_cast<std::size_t>(P.n()) * P.n(), 0), P_(P), n_(P.n()), table_(table), fact_(fact),
        used_(n_, 0), taken_(n_, 0) {}

  void branch(int first) { step(0, first, Int(0)); }

  std::vector<std::uint64_t> L;
  Wide total{0};
  Wide sum_squares{0};

 private:
  void step(int depth, int agent, const Int& acc) {
    const int g = P_.best_available(agent, taken_);
    used_[agent] = 1;
    taken_[g] = 1;
    L[agent * n_ + g] += fact_[n_ - depth - 1];
    descend(depth + 1, acc + table_[agent * n_ + g]);
    used_[agent] = 0;
    taken_[g] = 0;
  }

  void descend(int depth, const Int& acc) {
    if (depth == n_) {
      Wide w = acc;
      total += w;
      sum_squares += w * w;
      return;
    }
    for (int a = 0; a < n_; ++a)
      if (!used_[a]) step(depth, a, acc);
  }

  const PreparedInstance& P_;
  int n_;
  const std::vector<Int>& table_;
  const std::vector<std::uint64_t>& fact_;
  std::vector<char> used_, taken_;
};

template <typename Int, typename Wide>
void walk_all(const PreparedInstance& P, const std::vector<Int>& table, int workers, std::vector<std::uint64_t>& L,
              BigInt& total, BigInt& sum_squares) {
  const int n = P.n();
  std::vector<std::uint64_t> fact(n + 1, 1);
  for (int m = 1; m <= n; ++m) fact[m] = fact[m - 1] * static_cast<std::uint64_t>(m);

  struct Branch {
    std::vector<std::uint64_t> L;
    BigInt total, sum_squares;
  };
  std::vector<Branch> parts(n);
  parallel_for(static_cast<std::size_t>(n), workers, [&](std::size_t first) {
    OrderingWalk<Int, Wide> walk(P, table, fact);
    walk.branch(static_cast<int>(first));
    parts[first] = Branch{std::move(walk.L), to_big(walk.total), to_big(walk.sum_squares)};
  });

  L.assign(static_cast<std::size_t>(n) * n, 0);
  total = 0;
  sum_squares = 0;
  for (const auto& part : parts) {
    for (std::size_t c = 0; c < L.size(); ++c) L[c] += part.L[c];
    total += part.total;
    sum_squares += part.sum_squares;
  }
}

}  // namespace detail

// Function: enumerate
//
// Runs SD under all n! orderings and returns the exact lottery and moments.
// `objective` may be omitted (abstract instances only yield L and P).
inline ExactSummary enumerate(const PreparedInstance& P, std::optional<Objective> objective,
                              const EnumerateOptions& opts = {}) {
  const int n = P.n();
  const int cap = std::min(opts.cap, kHardOracleCap);
  if (n > cap)
    throw CapExceeded("exact enumeration refused: n=" + std::to_string(n) + " exceeds the oracle cap of " +
                      std::to_string(cap) + " (" + factorial(n).str() +
                      " orderings); raise it with --oracle-cap or RSDLAB_ORACLE_CAP (hard limit " +
                      std::to_string(kHardOracleCap) + ")");
  if (objective) require_objective(P.instance(), *objective);
  if (!objective && P.has_payoff()) objective = default_objective(P.instance());

  ExactSummary out;
  out.n = n;
  out.orderings = factorial(n);
  out.objective = objective;

  std::vector<std::uint64_t> flatL;
  BigInt total, sum_squares;

  // Integer payoffs: 64-bit with 128-bit accumulators when every partial sum
  // and every accumulated square provably fits, arbitrary precision otherwise.
  BigInt max_entry = 0;
  if (P.has_payoff())
    for (int a = 0; a < n; ++a)
      for (int g = 0; g < n; ++g) max_entry = std::max(max_entry, P.scaled(a, g));
  const unsigned obj_bits = bit_length(max_entry * n);
  const bool fast = obj_bits <= 62 && 2 * obj_bits + bit_length(out.orderings) <= 125;
  if (fast) {
    std::vector<std::int64_t> table(static_cast<std::size_t>(n) * n, 0);
    if (P.has_payoff())
      for (int a = 0; a < n; ++a)
        for (int g = 0; g < n; ++g) table[a * n + g] = P.scaled(a, g).convert_to<std::int64_t>();
    detail::walk_all<std::int64_t, __int128>(P, table, opts.workers, flatL, total, sum_squares);
  } else {
    std::vector<BigInt> table(static_cast<std::size_t>(n) * n);
    for (int a = 0; a < n; ++a)
      for (int g = 0; g < n; ++g) table[a * n + g] = P.scaled(a, g);
    detail::walk_all<BigInt, BigInt>(P, table, opts.workers, flatL, total, sum_squares);
  }

  out.L.assign(n, std::vector<std::uint64_t>(n));
  out.P.assign(n, std::vector<Rational>(n));
  for (int a = 0; a < n; ++a)
    for (int g = 0; g < n; ++g) {
      out.L[a][g] = flatL[a * n + g];
      out.P[a][g] = Rational(BigInt(flatL[a * n + g]), out.orderings);
    }
  if (objective) {
    const BigInt& s = P.scale();
    out.total = Rational(total, s);
    out.mean = Rational(total, out.orderings * s);
    out.second_moment = Rational(sum_squares, out.orderings * s * s);
    out.variance = out.second_moment - out.mean * out.mean;
  }
  return out;
}

inline ExactSummary enumerate(const AssignmentInstance& I, std::optional<Objective> objective,
                              const EnumerateOptions& opts = {}) {
  return enumerate(PreparedInstance(I), objective, opts);
}

/// True when every row and every column of L sums to n! and P is doubly stochastic.
inline bool is_doubly_stochastic(const ExactSummary& s) {
  for (int i = 0; i < s.n; ++i) {
    BigInt row = 0, col = 0;
    Rational prow = 0, pcol = 0;
    for (int j = 0; j < s.n; ++j) {
      row += s.L[i][j];
      col += s.L[j][i];
      prow += s.P[i][j];
      pcol += s.P[j][i];
    }
    if (row != s.orderings || col != s.orderings || prow != 1 || pcol != 1) return false;
  }
  return true;
}

// --- Bernoulli-family binomial tails -------------------------------------
//
// On the instance where only agent 1 values item 1, k sampled orderings give
// X ~ Binomial(k, 1/n) successes and the sample mean is X/k.

namespace detail {

inline void require_binomial_domain(int n, long k) {
  if (n < 2) throw std::invalid_argument("binomial tail needs n >= 2 (p = 1/n must be below 1)");
  if (k < 1) throw std::invalid_argument("binomial tail needs k >= 1");
}

inline void require_epsilon(const Rational& eps) {
  if (eps <= 0 || eps > 1) throw std::invalid_argument("epsilon must lie in (0, 1]");
}

// Sum of C(k,x) (n-1)^(k-x) over x where keep(x), divided by n^k.
template <typename Keep>
Rational binomial_mass(int n, long k, Keep keep) {
  BigInt numer = 0;
  BigInt coeff = 1;      // C(k, x), starting at x = k
  BigInt other = 1;      // (n-1)^(k-x)
  for (long x = k; x >= 0; --x) {
    if (keep(x)) numer += coeff * other;
    if (x == 0) break;
    coeff = coeff * x / (k - x + 1);
    other *= (n - 1);
  }
  BigInt denom = boost::multiprecision::pow(BigInt(n), static_cast<unsigned>(k));
  return Rational(numer, denom);
}

}  // namespace detail

// Function: binomial_failure_probability
//
// Pr[|X/k - 1/n| >= eps/n] for X ~ Binomial(k, 1/n), i.e. the exact chance
// that the sample mean is not an eps-approximation. With eps = p/q the event
// is |n x - k| q >= p k, decided in integers.
inline Rational binomial_failure_probability(int n, long k, const Rational& eps) {
  detail::require_binomial_domain(n, k);
  detail::require_epsilon(eps);
  const BigInt p = numerator(eps), q = denominator(eps);
  return detail::binomial_mass(n, k, [&](long x) {
    BigInt dev = BigInt(n) * x - k;
    if (dev < 0) dev = -dev;
    return dev * q >= p * k;
  });
}

/// Pr[X/k >= (1+eps)/n] for X ~ Binomial(k, 1/n).
inline Rational binomial_overshoot_probability(int n, long k, const Rational& eps) {
  detail::require_binomial_domain(n, k);
  if (eps <= 0) throw std::invalid_argument("eta must be positive");
  const BigInt p = numerator(eps), q = denominator(eps);
  return detail::binomial_mass(n, k, [&](long x) { return BigInt(n) * x * q >= (q + p) * k; });
}

struct ReverseChernoffCell {
  int n = 0;
  long k = 0;
  Rational eps;
  bool hypotheses_met = false;
  std::string unmet;       // which hypothesis failed, when not met
  Rational exact_tail;     // Pr[X/k >= (1+eps)/n]
  Float50 bound;           // exp(-9 eps^2 k / n)
  bool holds = false;
};

struct GridPoint {
  int n;
  long k;
  Rational eps;
};

// Function: verify_reverse_chernoff_grid
//
// For each cell with p = 1/n <= 1/2, eps in (0, 1/2] and eps^2 k / n >= 3,
// computes the exact overshoot probability and checks it against
// exp(-9 eps^2 k / n). Other cells are flagged and left unevaluated.
inline std::vector<ReverseChernoffCell> verify_reverse_chernoff_grid(const std::vector<GridPoint>& grid) {
  std::vector<ReverseChernoffCell> out;
  for (const auto& pt : grid) {
    ReverseChernoffCell cell;
    cell.n = pt.n;
    cell.k = pt.k;
    cell.eps = pt.eps;
    const Rational strength = pt.k >= 0 && pt.n > 0 ? pt.eps * pt.eps * pt.k / pt.n : Rational(0);
    if (pt.n < 2)
      cell.unmet = "p = 1/n exceeds 1/2";
    else if (pt.k < 1)
      cell.unmet = "k must be positive";
    else if (pt.eps <= 0 || pt.eps > Rational(1, 2))
      cell.unmet = "eta outside (0, 1/2]";
    else if (strength < 3)
      cell.unmet = "hypothesis unmet: eta^2 p k = " + to_decimal_string(strength) + " < 3";
    if (cell.unmet.empty()) {
      cell.hypotheses_met = true;
      cell.exact_tail = binomial_overshoot_probability(pt.n, pt.k, pt.eps);
      cell.bound = boost::multiprecision::exp(-9 * to_float50(strength));
      cell.holds = to_float50(cell.exact_tail) >= cell.bound;
    }
    out.push_back(std::move(cell));
  }
  return out;
}

}  // namespace rsdlab
