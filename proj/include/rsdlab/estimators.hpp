#pragma once

#include "core.hpp"
#include "parallel.hpp"
#include "rng.hpp"
#include "sd_engine.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace rsdlab {

struct EstimateReport {
  double estimate = 0.0;
  long k = 0;
  int lambda = 1;
  Objective objective = Objective::Welfare;
  std::uint64_t seed = 0;
  std::vector<double> run_values;  // xi_1 .. xi_lambda
  double wall_time = 0.0;          // seconds
};

enum class Side { Within, OverFail, UnderFail };

inline const char* to_string(Side s) {
  switch (s) {
    case Side::Within: return "within";
    case Side::OverFail: return "over-fail";
    case Side::UnderFail: return "under-fail";
  }
  return "?";
}

struct ApproxVerdict {
  Rational target;
  Rational eps;
  bool holds = false;
  Side side = Side::Within;
};

// Neumaier's compensated sum.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::fabs(sum_) >= std::fabs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  void merge(const CompensatedSum& other) {
    add(other.sum_);
    add(other.comp_);
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

// Samples are summed in fixed blocks, each block in index order, blocks
// merged in block order. The block layout is independent of the worker
// count, which is what makes the result bit-identical for any --workers.
inline constexpr long kSampleBlock = 4096;

// Function: sample_mean
//
// One run of the averaging estimator: k orderings, sample i drawn from
// substream (seed, run, i), mean of the SD objective values.
inline double sample_mean(const PreparedInstance& P, long k, std::uint64_t seed, std::uint64_t run, int workers = 1) {
  if (k < 1) throw std::invalid_argument("k must be at least 1");
  if (!P.has_payoff()) throw std::invalid_argument("estimation needs a value or metric instance");
  const long blocks = (k + kSampleBlock - 1) / kSampleBlock;
  std::vector<CompensatedSum> partial(static_cast<std::size_t>(blocks));
  parallel_for(static_cast<std::size_t>(blocks), workers, [&](std::size_t b) {
    std::vector<int> order;
    std::vector<char> taken;
    CompensatedSum acc;
    const long lo = static_cast<long>(b) * kSampleBlock;
    const long hi = std::min(k, lo + kSampleBlock);
    for (long i = lo; i < hi; ++i) {
      SplitMix64 rng(substream_seed(seed, run, static_cast<std::uint64_t>(i)));
      shuffle_identity(order, P.n(), rng);
      acc.add(P.run_objective(order, taken));
    }
    partial[b] = acc;
  });
  CompensatedSum total;
  for (const auto& part : partial) total.merge(part);
  return total.value() / static_cast<double>(k);
}

/// Median; the mean of the two middle order statistics when the count is even.
inline double median(std::vector<double> xs) {
  if (xs.empty()) throw std::invalid_argument("median of an empty sample");
  std::sort(xs.begin(), xs.end());
  const std::size_t m = xs.size() / 2;
  if (xs.size() % 2 == 1) return xs[m];
  return xs[m - 1] / 2 + xs[m] / 2;
}

// Function: estimate_mean
//
// Averaging estimator over k uniformly random orderings (run index 0).
inline EstimateReport estimate_mean(const PreparedInstance& P, Objective obj, long k, std::uint64_t seed,
                                    int workers = 1) {
  require_objective(P.instance(), obj);
  const auto start = std::chrono::steady_clock::now();
  EstimateReport r;
  r.k = k;
  r.lambda = 1;
  r.objective = obj;
  r.seed = seed;
  r.run_values = {sample_mean(P, k, seed, 0, workers)};
  r.estimate = r.run_values.front();
  r.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

// Function: estimate_median_of_means
//
// lambda independent averaging runs (run j uses substreams (seed, j, i),
// j = 0..lambda-1) and their median. lambda = 1 reproduces estimate_mean.
inline EstimateReport estimate_median_of_means(const PreparedInstance& P, Objective obj, long k, int lambda,
                                               std::uint64_t seed, int workers = 1) {
  require_objective(P.instance(), obj);
  if (lambda < 1) throw std::invalid_argument("lambda must be at least 1");
  if (k < 1) throw std::invalid_argument("k must be at least 1");
  const auto start = std::chrono::steady_clock::now();
  EstimateReport r;
  r.k = k;
  r.lambda = lambda;
  r.objective = obj;
  r.seed = seed;
  r.run_values.resize(lambda);
  // Parallelism goes inside each run so that small-k, large-lambda and
  // large-k, small-lambda configurations both spread across workers.
  for (int j = 0; j < lambda; ++j) r.run_values[j] = sample_mean(P, k, seed, static_cast<std::uint64_t>(j), workers);
  r.estimate = median(r.run_values);
  r.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

// Function: check_approx
//
// Strict test |estimate - target| < eps * target, evaluated exactly on the
// double's rational value. A zero target holds only for a zero estimate.
inline ApproxVerdict check_approx(double estimate, const Rational& target, const Rational& eps) {
  if (eps <= 0 || eps > 1) throw std::invalid_argument("epsilon must lie in (0, 1]");
  if (target < 0) throw std::invalid_argument("target must be non-negative");
  ApproxVerdict v{target, eps, false, Side::Within};
  const Rational est = rational_from_double(estimate);
  if (target == 0) {
    v.holds = est == 0;
    v.side = v.holds ? Side::Within : (est > 0 ? Side::OverFail : Side::UnderFail);
    return v;
  }
  if (est >= (1 + eps) * target)
    v.side = Side::OverFail;
  else if (est <= (1 - eps) * target)
    v.side = Side::UnderFail;
  v.holds = v.side == Side::Within;
  return v;
}

}  // namespace rsdlab
