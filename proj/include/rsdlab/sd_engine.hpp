#pragma once

#include "core.hpp"
#include "rng.hpp"

#include <span>
#include <stdexcept>
#include <vector>

namespace rsdlab {

// Class: PreparedInstance
//
// A validated instance with everything serial dictatorship needs laid out
// flat: per-agent preference lists, payoffs as doubles for sampling, and
// payoffs as integers over a common denominator for exact accumulation.
class PreparedInstance {
 public:
  explicit PreparedInstance(AssignmentInstance I) : instance_(std::move(I)) {
    require_valid(instance_);
    n_ = instance_.n();
    prefs_.resize(static_cast<std::size_t>(n_) * n_);
    for (int a = 1; a <= n_; ++a) {
      auto r = derive_preferences(instance_, a);
      for (int t = 0; t < n_; ++t) prefs_[(a - 1) * n_ + t] = r[t] - 1;
    }
    if (!instance_.has_cardinal_payoff()) return;

    const auto& M = instance_.matrix();
    scale_ = 1;
    for (const auto& row : M)
      for (const auto& x : row) scale_ = lcm(scale_, denominator(x));
    payoff_.resize(prefs_.size());
    scaled_.resize(prefs_.size());
    for (int a = 0; a < n_; ++a)
      for (int g = 0; g < n_; ++g) {
        const Rational& x = M[a][g];
        payoff_[a * n_ + g] = to_double(x);
        scaled_[a * n_ + g] = numerator(x) * (scale_ / denominator(x));
      }
  }

  int n() const { return n_; }
  Setting setting() const { return instance_.setting(); }
  const AssignmentInstance& instance() const { return instance_; }
  bool has_payoff() const { return !payoff_.empty(); }

  /// Items of agent a (0-based), most preferred first, 0-based.
  std::span<const int> preferences(int a) const { return {prefs_.data() + a * n_, static_cast<std::size_t>(n_)}; }
  double payoff(int a, int g) const { return payoff_[a * n_ + g]; }
  /// payoff(a, g) == scaled(a, g) / scale(), exactly.
  const BigInt& scaled(int a, int g) const { return scaled_[a * n_ + g]; }
  const BigInt& scale() const { return scale_; }

  /// First item on agent a's list not yet taken (0-based in and out).
  int best_available(int a, const std::vector<char>& taken) const {
    const int* p = prefs_.data() + a * n_;
    for (int t = 0; t < n_; ++t)
      if (!taken[p[t]]) return p[t];
    throw std::logic_error("no item left for agent");
  }

  // Runs SD for a 1-based order, writing 0-based items per 0-based agent.
  // `taken` is scratch of size n.
  void run(std::span<const int> order, std::span<int> item_of, std::vector<char>& taken) const {
    taken.assign(n_, 0);
    for (int who : order) {
      int g = best_available(who - 1, taken);
      taken[g] = 1;
      item_of[who - 1] = g;
    }
  }

  /// Sum of double payoffs along the SD run for a 1-based order.
  double run_objective(std::span<const int> order, std::vector<char>& taken) const {
    taken.assign(n_, 0);
    double total = 0.0;
    for (int who : order) {
      int g = best_available(who - 1, taken);
      taken[g] = 1;
      total += payoff(who - 1, g);
    }
    return total;
  }

 private:
  AssignmentInstance instance_;
  int n_ = 0;
  std::vector<int> prefs_;
  std::vector<double> payoff_;
  std::vector<BigInt> scaled_;
  BigInt scale_ = 1;
};

// Function: serial_dictatorship
//
// Agents pick in order; each takes its most preferred remaining item.
inline Matching serial_dictatorship(const PreparedInstance& P, const Ordering& order) {
  if (order.size() != P.n()) throw std::invalid_argument("ordering length differs from n");
  std::vector<int> item_of(P.n());
  std::vector<char> taken;
  P.run(order.seq(), item_of, taken);
  for (int& g : item_of) ++g;
  return Matching(std::move(item_of));
}

inline Matching serial_dictatorship(const AssignmentInstance& I, const Ordering& order) {
  return serial_dictatorship(PreparedInstance(I), order);
}

/// Exact social welfare or social cost of a matching.
inline Rational evaluate(const AssignmentInstance& I, const Matching& M, Objective obj) {
  require_objective(I, obj);
  if (M.size() != I.n()) throw std::invalid_argument("matching size differs from n");
  Rational total = 0;
  for (int a = 1; a <= I.n(); ++a) total += I.payoff(a, M.item_of(a));
  return total;
}

/// Uniform ordering of 1..n drawn from the generator.
inline Ordering random_ordering(SplitMix64& rng, int n) {
  std::vector<int> seq;
  shuffle_identity(seq, n, rng);
  return Ordering(std::move(seq));
}

struct SdRun {
  Ordering ordering;
  Matching matching;
  Rational objective_value;
};

inline SdRun run_sd(const PreparedInstance& P, const Ordering& order, Objective obj) {
  Matching M = serial_dictatorship(P, order);
  Rational value = evaluate(P.instance(), M, obj);
  return SdRun{order, std::move(M), std::move(value)};
}

}  // namespace rsdlab
