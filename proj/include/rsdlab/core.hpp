#pragma once

#include "rational.hpp"

#include <algorithm>
#include <numeric>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

// Agents and items are numbered 1..n in every public signature. Internal
// storage is 0-based; the accessors below translate.

namespace rsdlab {

enum class Setting { Value, Metric, Abstract };
enum class Objective { Welfare, Cost };

inline const char* to_string(Setting s) {
  switch (s) {
    case Setting::Value: return "value";
    case Setting::Metric: return "metric";
    case Setting::Abstract: return "abstract";
  }
  return "?";
}

inline const char* to_string(Objective o) { return o == Objective::Welfare ? "welfare" : "cost"; }

using RationalMatrix = std::vector<std::vector<Rational>>;
using Ranking = std::vector<int>;

/// Agents and items as points on the real line; c[i][g] = |agent[i] - item[g]|.
struct LinePoints {
  std::vector<Rational> agents;
  std::vector<Rational> items;
};

class AssignmentInstance {
 public:
  static AssignmentInstance with_values(RationalMatrix values, std::optional<int> n = {}) {
    AssignmentInstance I;
    I.n_ = n.value_or(static_cast<int>(values.size()));
    I.setting_ = Setting::Value;
    I.matrix_ = std::move(values);
    return I;
  }

  static AssignmentInstance with_costs(RationalMatrix costs, std::optional<int> n = {}) {
    AssignmentInstance I;
    I.n_ = n.value_or(static_cast<int>(costs.size()));
    I.setting_ = Setting::Metric;
    I.matrix_ = std::move(costs);
    return I;
  }

  static AssignmentInstance on_line(std::vector<Rational> agents, std::vector<Rational> items,
                                    std::optional<int> n = {}) {
    AssignmentInstance I;
    I.n_ = n.value_or(static_cast<int>(agents.size()));
    I.setting_ = Setting::Metric;
    I.matrix_.assign(agents.size(), std::vector<Rational>(items.size()));
    for (std::size_t i = 0; i < agents.size(); ++i)
      for (std::size_t g = 0; g < items.size(); ++g) I.matrix_[i][g] = abs(agents[i] - items[g]);
    I.points_ = LinePoints{std::move(agents), std::move(items)};
    return I;
  }

  static AssignmentInstance with_rankings(std::vector<Ranking> rankings, std::optional<int> n = {}) {
    AssignmentInstance I;
    I.n_ = n.value_or(static_cast<int>(rankings.size()));
    I.setting_ = Setting::Abstract;
    I.rankings_ = std::move(rankings);
    return I;
  }

  int n() const { return n_; }
  Setting setting() const { return setting_; }
  bool has_cardinal_payoff() const { return setting_ != Setting::Abstract; }

  /// Value or cost matrix (materialized from points for the line form).
  const RationalMatrix& matrix() const {
    if (setting_ == Setting::Abstract) throw std::logic_error("abstract instance has no payoff matrix");
    return matrix_;
  }
  const std::optional<LinePoints>& points() const { return points_; }
  const std::vector<Ranking>& rankings() const {
    if (setting_ != Setting::Abstract) throw std::logic_error("only abstract instances carry rankings");
    return rankings_;
  }

  /// Value (or cost) of agent for item, both 1-based.
  const Rational& payoff(int agent, int item) const { return matrix().at(agent - 1).at(item - 1); }

 private:
  AssignmentInstance() = default;

  int n_ = 0;
  Setting setting_ = Setting::Value;
  RationalMatrix matrix_;
  std::optional<LinePoints> points_;
  std::vector<Ranking> rankings_;
};

namespace detail {

inline bool is_permutation_of_1n(const std::vector<int>& seq, int n) {
  if (static_cast<int>(seq.size()) != n) return false;
  std::vector<char> seen(n + 1, 0);
  for (int v : seq) {
    if (v < 1 || v > n || seen[v]) return false;
    seen[v] = 1;
  }
  return true;
}

}  // namespace detail

/// Dictator order; position t (0-based) holds the (t+1)-th agent to pick.
class Ordering {
 public:
  explicit Ordering(std::vector<int> seq) : seq_(std::move(seq)) {
    if (!detail::is_permutation_of_1n(seq_, static_cast<int>(seq_.size())))
      throw std::invalid_argument("ordering is not a permutation of 1..n");
  }
  static Ordering identity(int n) {
    std::vector<int> s(n);
    std::iota(s.begin(), s.end(), 1);
    return Ordering(std::move(s));
  }
  int size() const { return static_cast<int>(seq_.size()); }
  int operator[](int position) const { return seq_[position]; }
  const std::vector<int>& seq() const { return seq_; }
  bool operator==(const Ordering&) const = default;

 private:
  std::vector<int> seq_;
};

/// Perfect matching; item_of(i) is the item held by agent i.
class Matching {
 public:
  explicit Matching(std::vector<int> assign) : assign_(std::move(assign)) {
    if (!detail::is_permutation_of_1n(assign_, static_cast<int>(assign_.size())))
      throw std::invalid_argument("matching is not a bijection on 1..n");
  }
  int size() const { return static_cast<int>(assign_.size()); }
  int item_of(int agent) const { return assign_.at(agent - 1); }
  const std::vector<int>& assign() const { return assign_; }
  bool operator==(const Matching&) const = default;

 private:
  std::vector<int> assign_;
};

// Throws std::invalid_argument when objective and payoff disagree.
inline void require_objective(const AssignmentInstance& I, Objective obj) {
  if (obj == Objective::Welfare && I.setting() != Setting::Value)
    throw std::invalid_argument("welfare objective requires a value instance, got " +
                                std::string(to_string(I.setting())));
  if (obj == Objective::Cost && I.setting() != Setting::Metric)
    throw std::invalid_argument("cost objective requires a metric instance, got " +
                                std::string(to_string(I.setting())));
}

/// The natural objective for a cardinal instance.
inline Objective default_objective(const AssignmentInstance& I) {
  if (I.setting() == Setting::Abstract) throw std::invalid_argument("abstract instance has no objective");
  return I.setting() == Setting::Value ? Objective::Welfare : Objective::Cost;
}

// Function: derive_preferences
//
// Strict ranking of items for an agent: value descending, cost ascending,
// or the stored ranking. Ties go to the smaller item index.
inline Ranking derive_preferences(const AssignmentInstance& I, int agent) {
  if (agent < 1 || agent > I.n()) throw std::out_of_range("agent index out of range");
  if (I.setting() == Setting::Abstract) return I.rankings().at(agent - 1);

  const auto& row = I.matrix().at(agent - 1);
  Ranking order(row.size());
  std::iota(order.begin(), order.end(), 1);
  if (I.setting() == Setting::Value) {
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return row[a - 1] > row[b - 1]; });
  } else {
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return row[a - 1] < row[b - 1]; });
  }
  return order;
}

struct Violation {
  std::string kind;  // "shape", "negative", "ranking", "triangle"
  std::string detail;
};

struct Validation {
  std::vector<Violation> violations;
  std::size_t triangle_failures = 0;  // total count, even past the listing cap
  bool ok() const { return violations.empty(); }
};

// Function: validate
//
// Checks every invariant and reports the offending indices (1-based). Never
// throws. The triangle scan is the full four-index loop; only the first
// `listing_cap` triangle failures are listed individually.
inline Validation validate(const AssignmentInstance& I, std::size_t listing_cap = 64) {
  Validation out;
  auto report = [&](std::string kind, std::string detail) {
    out.violations.push_back({std::move(kind), std::move(detail)});
  };
  const int n = I.n();
  if (n < 1) {
    report("shape", "n must be at least 1, got " + std::to_string(n));
    return out;
  }

  if (I.setting() == Setting::Abstract) {
    const auto& R = I.rankings();
    if (static_cast<int>(R.size()) != n)
      report("shape", "expected " + std::to_string(n) + " rankings, got " + std::to_string(R.size()));
    for (std::size_t i = 0; i < R.size(); ++i)
      if (!detail::is_permutation_of_1n(R[i], n))
        report("ranking", "ranking of agent " + std::to_string(i + 1) + " is not a permutation of 1.." +
                              std::to_string(n));
    return out;
  }

  if (const auto& pts = I.points()) {
    if (static_cast<int>(pts->agents.size()) != n)
      report("shape", "expected " + std::to_string(n) + " agent points, got " +
                          std::to_string(pts->agents.size()));
    if (static_cast<int>(pts->items.size()) != n)
      report("shape", "expected " + std::to_string(n) + " item points, got " +
                          std::to_string(pts->items.size()));
    return out;  // distances on a line are a metric by construction
  }

  const auto& M = I.matrix();
  const char* noun = I.setting() == Setting::Value ? "value" : "cost";
  bool square = static_cast<int>(M.size()) == n;
  if (!square)
    report("shape", "expected " + std::to_string(n) + " rows, got " + std::to_string(M.size()));
  for (std::size_t i = 0; i < M.size(); ++i) {
    if (static_cast<int>(M[i].size()) != n) {
      square = false;
      report("shape", "row " + std::to_string(i + 1) + " has " + std::to_string(M[i].size()) +
                          " entries, expected " + std::to_string(n));
    }
    for (std::size_t g = 0; g < M[i].size(); ++g)
      if (M[i][g] < 0)
        report("negative", std::string("negative ") + noun + " at (" + std::to_string(i + 1) + "," +
                               std::to_string(g + 1) + "): " + to_fraction_string(M[i][g]));
  }
  if (!square || I.setting() != Setting::Metric) return out;

  // c[i1][g1] <= c[i1][g2] + c[i2][g2] + c[i2][g1]
  for (int i1 = 0; i1 < n; ++i1)
    for (int g1 = 0; g1 < n; ++g1)
      for (int i2 = 0; i2 < n; ++i2)
        for (int g2 = 0; g2 < n; ++g2) {
          if (M[i1][g1] <= M[i1][g2] + M[i2][g2] + M[i2][g1]) continue;
          if (out.triangle_failures++ >= listing_cap) continue;
          std::ostringstream os;
          os << "triangle inequality fails at (i1=" << i1 + 1 << ",g1=" << g1 + 1 << ",i2=" << i2 + 1
             << ",g2=" << g2 + 1 << "): " << to_fraction_string(M[i1][g1]) << " > "
             << to_fraction_string(M[i1][g2]) << "+" << to_fraction_string(M[i2][g2]) << "+"
             << to_fraction_string(M[i2][g1]);
          report("triangle", os.str());
        }
  if (out.triangle_failures > listing_cap)
    report("triangle", std::to_string(out.triangle_failures - listing_cap) + " further triangle failures");
  return out;
}

/// Throws std::invalid_argument carrying the first violations.
inline void require_valid(const AssignmentInstance& I) {
  auto v = validate(I, 4);
  if (v.ok()) return;
  std::string msg = "invalid instance:";
  for (std::size_t i = 0; i < v.violations.size() && i < 4; ++i) msg += " [" + v.violations[i].detail + "]";
  throw std::invalid_argument(msg);
}

/// Instance with one agent and its top item removed; ids map new -> old.
struct ReducedInstance {
  AssignmentInstance instance;
  std::vector<int> agent_ids;
  std::vector<int> item_ids;
  int removed_item = 0;
};

// Function: remove_agent_best
inline ReducedInstance remove_agent_best(const AssignmentInstance& I, int agent) {
  const int n = I.n();
  if (n < 2) throw std::invalid_argument("cannot remove an agent from a single-agent instance");
  if (I.setting() == Setting::Abstract)
    throw std::invalid_argument("remove_agent_best needs a value or metric instance");
  if (agent < 1 || agent > n) throw std::out_of_range("agent index out of range");

  const int best = derive_preferences(I, agent).front();
  std::vector<int> agent_ids, item_ids;
  for (int a = 1; a <= n; ++a)
    if (a != agent) agent_ids.push_back(a);
  for (int g = 1; g <= n; ++g)
    if (g != best) item_ids.push_back(g);

  auto build = [&]() {
    if (const auto& pts = I.points()) {
      std::vector<Rational> ap, ip;
      for (int a : agent_ids) ap.push_back(pts->agents[a - 1]);
      for (int g : item_ids) ip.push_back(pts->items[g - 1]);
      return AssignmentInstance::on_line(std::move(ap), std::move(ip));
    }
    RationalMatrix sub;
    for (int a : agent_ids) {
      std::vector<Rational> row;
      for (int g : item_ids) row.push_back(I.payoff(a, g));
      sub.push_back(std::move(row));
    }
    return I.setting() == Setting::Value ? AssignmentInstance::with_values(std::move(sub))
                                         : AssignmentInstance::with_costs(std::move(sub));
  };
  return ReducedInstance{build(), std::move(agent_ids), std::move(item_ids), best};
}

}  // namespace rsdlab
