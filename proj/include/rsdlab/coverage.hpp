#pragma once

#include "bounds.hpp"
#include "core.hpp"
#include "estimators.hpp"
#include "exact_oracle.hpp"
#include "generators.hpp"
#include "parallel.hpp"
#include "rng.hpp"
#include "sd_engine.hpp"

#include <cstdint>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

// Repeated estimator runs against a known expected objective, counting how
// often the estimate misses the strict eps-approximation.

namespace rsdlab {

enum class EstimatorKind { Mean, MedianOfMeans };

struct EstimatorConfig {
  EstimatorKind kind = EstimatorKind::Mean;
  long k = 1;
  int lambda = 1;
  Rational eps = Rational(1, 2);
  std::optional<Method> method;      // the sample-size rule k (and lambda) came from
  std::optional<Rational> delta;     // target failure probability, if any
};

/// k and lambda from a sample-size rule; median-of-means when it sets lambda.
inline EstimatorConfig config_from_plan(const SampleSizePlan& plan) {
  EstimatorConfig c;
  c.kind = plan.lambda ? EstimatorKind::MedianOfMeans : EstimatorKind::Mean;
  c.k = static_cast<long>(plan.k);
  c.lambda = plan.lambda ? static_cast<int>(*plan.lambda) : 1;
  c.eps = plan.eps;
  c.method = plan.method;
  c.delta = plan.delta;
  return c;
}

enum class ReferenceSource { ExactOracle, AnalyticFamily, UserSupplied };

inline const char* to_string(ReferenceSource s) {
  switch (s) {
    case ReferenceSource::ExactOracle: return "exact-oracle";
    case ReferenceSource::AnalyticFamily: return "analytic-family";
    case ReferenceSource::UserSupplied: return "user-supplied";
  }
  return "?";
}

struct Reference {
  Rational value;
  ReferenceSource source = ReferenceSource::UserSupplied;
};

/// Closed-form expected objective where one is known (Bernoulli family: 1/n).
inline std::optional<Reference> analytic_reference(Family family, int n) {
  if (family == Family::BernoulliWelfare) return Reference{Rational(1, n), ReferenceSource::AnalyticFamily};
  return std::nullopt;
}

struct TrialRow {
  long trial_index = 0;
  std::uint64_t seed = 0;
  double estimate = 0.0;
  bool holds = false;
  Side side = Side::Within;
};

struct CoverageReport {
  std::string instance_id;
  Objective objective = Objective::Welfare;
  EstimatorConfig config;
  std::uint64_t master_seed = 0;
  long trials = 0;
  Reference reference;
  long failures = 0;
  double empirical_rate = 0.0;
  std::vector<TrialRow> rows;
};

/// Base seed of trial t: substream (master_seed, run = 2^64-1, index = t).
inline std::uint64_t trial_seed(std::uint64_t master_seed, long trial) {
  return substream_seed(master_seed, ~std::uint64_t{0}, static_cast<std::uint64_t>(trial));
}

// Function: run_coverage
//
// Without a supplied reference the exact oracle provides one; beyond the
// oracle cap the call fails and asks for --reference.
inline CoverageReport run_coverage(const PreparedInstance& P, Objective obj, const EstimatorConfig& config, long trials,
                                   std::uint64_t master_seed, std::optional<Reference> reference = {},
                                   int workers = 1, const EnumerateOptions& oracle = {},
                                   std::string instance_id = "instance") {
  require_objective(P.instance(), obj);
  if (trials < 1) throw std::invalid_argument("trials must be at least 1");
  if (config.k < 1 || config.lambda < 1) throw std::invalid_argument("k and lambda must be at least 1");
  if (!reference) {
    if (P.n() > std::min(oracle.cap, kHardOracleCap))
      throw std::invalid_argument("no reference value: n=" + std::to_string(P.n()) + " exceeds the oracle cap " +
                                  std::to_string(oracle.cap) +
                                  "; supply the expected objective with --reference or raise --oracle-cap");
    reference = Reference{enumerate(P, obj, oracle).mean, ReferenceSource::ExactOracle};
  }

  CoverageReport report;
  report.instance_id = std::move(instance_id);
  report.objective = obj;
  report.config = config;
  report.master_seed = master_seed;
  report.trials = trials;
  report.reference = *reference;
  report.rows.resize(static_cast<std::size_t>(trials));

  // Trials run across workers; each estimator call is single-threaded so a
  // trial's value never depends on how trials were distributed.
  parallel_for(static_cast<std::size_t>(trials), workers, [&](std::size_t t) {
    TrialRow& row = report.rows[t];
    row.trial_index = static_cast<long>(t);
    row.seed = trial_seed(master_seed, row.trial_index);
    const auto est = config.kind == EstimatorKind::Mean
                         ? estimate_mean(P, obj, config.k, row.seed, 1)
                         : estimate_median_of_means(P, obj, config.k, config.lambda, row.seed, 1);
    row.estimate = est.estimate;
    const auto verdict = check_approx(row.estimate, reference->value, config.eps);
    row.holds = verdict.holds;
    row.side = verdict.side;
  });

  for (const auto& row : report.rows)
    if (!row.holds) ++report.failures;
  report.empirical_rate = static_cast<double>(report.failures) / static_cast<double>(trials);
  return report;
}

/// trial_index,seed,estimate,reference,epsilon,verdict,side
inline void write_coverage_csv(std::ostream& os, const CoverageReport& r) {
  os << "trial_index,seed,estimate,reference,epsilon,verdict,side\n";
  const std::string reference = to_decimal_string(r.reference.value);
  const std::string eps = to_decimal_string(r.config.eps);
  for (const auto& row : r.rows)
    os << row.trial_index << ',' << row.seed << ',' << to_decimal_string(row.estimate) << ',' << reference << ','
       << eps << ',' << (row.holds ? "pass" : "fail") << ',' << to_string(row.side) << '\n';
}

}  // namespace rsdlab
