#pragma once

#include "rational.hpp"

#include <array>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

// Sample-size calculators for the averaging and median-of-means estimators,
// and closed-form evaluators for the concentration inequalities behind them.
// Rational parts of every formula are exact; logarithms are evaluated in
// 50-digit binary floating point before the ceiling is taken.

namespace rsdlab {

enum class Method { WelfareBernstein, WelfareHoeffding, CostMedianOfMeans, CostSingleRun, CostBernstein, CostChebyshev };

inline constexpr Method kAllMethods[] = {Method::WelfareBernstein, Method::WelfareHoeffding,
                                         Method::CostMedianOfMeans, Method::CostSingleRun,
                                         Method::CostBernstein,     Method::CostChebyshev};

inline const char* to_string(Method m) {
  switch (m) {
    case Method::WelfareBernstein: return "welfare-bernstein";
    case Method::WelfareHoeffding: return "welfare-hoeffding";
    case Method::CostMedianOfMeans: return "cost-median-of-means";
    case Method::CostSingleRun: return "cost-single-run";
    case Method::CostBernstein: return "cost-bernstein";
    case Method::CostChebyshev: return "cost-chebyshev";
  }
  return "?";
}

inline std::optional<Method> method_from_string(std::string_view s) {
  for (Method m : kAllMethods)
    if (s == to_string(m)) return m;
  return std::nullopt;
}

// Struct: SampleSizePlan
//
// k = ceil(k_coefficient * k_log_factor). The log factor is ln(2/delta) for
// the methods whose bound carries it and exactly 1 otherwise. lambda is
// set for the median-of-means method only.
struct SampleSizePlan {
  Method method = Method::WelfareBernstein;
  int n = 1;
  Rational eps;
  Rational delta;
  std::uint64_t k = 1;
  std::optional<std::uint64_t> lambda;
  Rational k_coefficient;
  Float50 k_log_factor = 1;
  Float50 k_raw;  // pre-ceiling k
  std::optional<Float50> lambda_raw;
};

namespace detail {

inline std::uint64_t ceil_to_count(const Float50& x) {
  Float50 c = boost::multiprecision::ceil(x);
  if (c < 1) c = 1;
  if (c > Float50(std::numeric_limits<std::uint64_t>::max()))
    throw std::overflow_error("sample size exceeds 64-bit range");
  return c.convert_to<std::uint64_t>();
}

inline std::uint64_t ceil_to_count(const Rational& x) {
  BigInt q = numerator(x) / denominator(x);
  if (q * denominator(x) < numerator(x)) ++q;
  if (q < 1) q = 1;
  if (q > std::numeric_limits<std::uint64_t>::max()) throw std::overflow_error("sample size exceeds 64-bit range");
  return q.convert_to<std::uint64_t>();
}

inline Float50 ln_ratio(const Rational& x) { return boost::multiprecision::log(to_float50(x)); }

}  // namespace detail

/// 4 / ln(4/e), the median-of-means repetition constant.
inline Float50 median_repetition_constant() {
  return Float50(4) / (boost::multiprecision::log(Float50(4)) - 1);
}

// Function: sample_size
inline SampleSizePlan sample_size(Method method, int n, const Rational& eps, const Rational& delta) {
  if (n < 1) throw std::invalid_argument("n must be at least 1");
  if (eps <= 0 || eps > 1) throw std::invalid_argument("epsilon must lie in (0, 1]");
  if (delta <= 0 || delta > 1) throw std::invalid_argument("delta must lie in (0, 1]");

  SampleSizePlan plan;
  plan.method = method;
  plan.n = n;
  plan.eps = eps;
  plan.delta = delta;

  const Rational nn = n;
  const Rational n3 = nn * nn * nn;
  const Rational e2 = eps * eps;
  const Float50 log_two_over_delta = detail::ln_ratio(Rational(2) / delta);
  bool has_log = true;

  switch (method) {
    case Method::WelfareBernstein:
      plan.k_coefficient = 8 * nn / (3 * e2);
      break;
    case Method::WelfareHoeffding:
      plan.k_coefficient = nn * nn / (2 * e2);
      break;
    case Method::CostMedianOfMeans:
      plan.k_coefficient = 4 * n3 / e2;
      has_log = false;
      plan.lambda_raw = median_repetition_constant() * log_two_over_delta;
      plan.lambda = detail::ceil_to_count(*plan.lambda_raw);
      break;
    case Method::CostSingleRun:
      // Fixed failure chance of at most 1/4 per side; delta is not used.
      plan.k_coefficient = 3 * n3 / e2;
      has_log = false;
      break;
    case Method::CostBernstein: {
      const Rational variance_term = n3 / e2;
      const Rational range_term = Rational(BigInt(1) << n) / (3 * eps);
      plan.k_coefficient = 4 * (variance_term > range_term ? variance_term : range_term);
      break;
    }
    case Method::CostChebyshev:
      plan.k_coefficient = n3 / (e2 * delta);
      has_log = false;
      break;
  }

  if (has_log) {
    plan.k_log_factor = log_two_over_delta;
    plan.k_raw = to_float50(plan.k_coefficient) * log_two_over_delta;
    plan.k = detail::ceil_to_count(plan.k_raw);
  } else {
    plan.k_log_factor = 1;
    plan.k_raw = to_float50(plan.k_coefficient);
    plan.k = detail::ceil_to_count(plan.k_coefficient);
  }
  return plan;
}

// Struct: LowerBoundWindow
//
// The range 3n/eps^2 <= k < n/(9 eps^2) ln(1/delta) on which the averaging
// estimator provably fails on the Bernoulli instance with probability above
// delta. Only meaningful when delta < e^-27 and the window holds an integer.
struct LowerBoundWindow {
  Float50 lower;
  Float50 upper;
  std::uint64_t first_k = 0;  // smallest integer in the window
  std::uint64_t last_k = 0;   // largest integer in the window
  bool applicable = false;
  std::string reason;
};

inline LowerBoundWindow welfare_lower_bound_window(int n, const Rational& eps, double delta) {
  if (n < 2) throw std::invalid_argument("lower-bound window needs n >= 2");
  if (eps <= 0 || eps > 1) throw std::invalid_argument("epsilon must lie in (0, 1]");
  LowerBoundWindow w;
  const Rational lower = Rational(3 * n) / (eps * eps);
  w.lower = to_float50(lower);
  if (!(delta > 0.0) || !(delta < 1.0)) {
    w.reason = "delta outside (0, e^-27)";
    return w;
  }
  const Float50 log_inv_delta = -boost::multiprecision::log(Float50(delta));
  w.upper = to_float50(Rational(n) / (9 * eps * eps)) * log_inv_delta;
  w.first_k = detail::ceil_to_count(lower);
  const Float50 hi = boost::multiprecision::ceil(w.upper) - 1;
  w.last_k = hi < 0 ? 0 : hi.convert_to<std::uint64_t>();
  if (log_inv_delta <= 27)
    w.reason = "delta >= e^-27";
  else if (w.first_k > w.last_k)
    w.reason = "window holds no integer k";
  else
    w.applicable = true;
  return w;
}

// --- concentration inequalities ------------------------------------------

enum class Inequality { Bernstein, Hoeffding, Chebyshev, ChebyshevCantelli, Chernoff, ReverseChernoff, BhatiaDavis };

/// UpperTail: Pr[...] <= value. LowerTail: Pr[...] >= value. Variance: sigma^2 <= value.
enum class BoundKind { UpperTail, LowerTail, Variance };

struct BoundValue {
  Inequality inequality;
  BoundKind kind;
  double value = 0.0;
  bool vacuous = false;  // an upper tail bound above 1; returned unclamped
};

class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

namespace detail {
inline BoundValue tail(Inequality which, BoundKind kind, double v) {
  return BoundValue{which, kind, v, kind == BoundKind::UpperTail && v > 1.0};
}
inline void need(bool ok, const char* hypothesis) {
  if (!ok) throw DomainError(std::string("hypothesis violated: ") + hypothesis);
}
}  // namespace detail

/// Pr[|sum X_i| >= t] <= 2 exp(-3t^2 / (6 sum sigma^2 + 2 alpha t)), |X_i| <= alpha, mean 0.
inline BoundValue bernstein_bound(double t, double alpha, double sum_variance) {
  detail::need(t > 0, "t > 0");
  detail::need(alpha >= 0, "alpha >= 0");
  detail::need(sum_variance >= 0, "sum of variances >= 0");
  const double denom = 6 * sum_variance + 2 * alpha * t;
  detail::need(denom > 0, "6 sum sigma^2 + 2 alpha t > 0");
  return detail::tail(Inequality::Bernstein, BoundKind::UpperTail, 2 * std::exp(-3 * t * t / denom));
}

/// Pr[|sum X_i - mu| >= t] <= 2 exp(-2t^2 / sum (b_i - a_i)^2).
inline BoundValue hoeffding_bound(double t, double sum_range_squares) {
  detail::need(t > 0, "t > 0");
  detail::need(sum_range_squares > 0, "sum (b_i - a_i)^2 > 0");
  return detail::tail(Inequality::Hoeffding, BoundKind::UpperTail, 2 * std::exp(-2 * t * t / sum_range_squares));
}

/// Pr[|X - mu| >= t] <= sigma^2 / t^2.
inline BoundValue chebyshev_bound(double variance, double t) {
  detail::need(t > 0, "t > 0");
  detail::need(variance >= 0, "sigma^2 >= 0");
  return detail::tail(Inequality::Chebyshev, BoundKind::UpperTail, variance / (t * t));
}

/// Pr[X - mu >= t sigma] <= 1 / (1 + t^2).
inline BoundValue chebyshev_cantelli_bound(double t) {
  detail::need(t > 0, "t > 0");
  return detail::tail(Inequality::ChebyshevCantelli, BoundKind::UpperTail, 1.0 / (1.0 + t * t));
}

/// Pr[X >= (1+eta) mu] <= (e^eta / (1+eta)^(1+eta))^mu for a sum of 0/1 variables.
inline BoundValue chernoff_bound(double eta, double mu) {
  detail::need(eta > 0, "eta > 0");
  detail::need(mu >= 0, "mu >= 0");
  const double log_base = eta - (1 + eta) * std::log1p(eta);
  return detail::tail(Inequality::Chernoff, BoundKind::UpperTail, std::exp(mu * log_base));
}

/// Pr[mean >= (1+eta) p] >= exp(-9 eta^2 p k) for k i.i.d. Bernoulli(p).
inline BoundValue reverse_chernoff_bound(double eta, double p, double k) {
  detail::need(p > 0 && p <= 0.5, "p in (0, 1/2]");
  detail::need(eta > 0 && eta <= 0.5, "eta in (0, 1/2]");
  detail::need(eta * eta * p * k >= 3, "eta^2 p k >= 3");
  return detail::tail(Inequality::ReverseChernoff, BoundKind::LowerTail, std::exp(-9 * eta * eta * p * k));
}

/// sigma^2 <= (beta - mu)(mu - alpha) for a variable in [alpha, beta] with mean mu.
inline BoundValue bhatia_davis_bound(double alpha, double beta, double mu) {
  detail::need(alpha <= beta, "alpha <= beta");
  detail::need(alpha <= mu && mu <= beta, "alpha <= mu <= beta");
  return BoundValue{Inequality::BhatiaDavis, BoundKind::Variance, (beta - mu) * (mu - alpha), false};
}

// Function: bound_value
//
// Named-parameter front end over the evaluators above. Missing parameters
// are reported as domain errors naming the parameter.
struct BoundParams {
  std::optional<double> t, alpha, beta, mu, sum_variance, sum_range_squares, variance, eta, p, k;
};

inline std::optional<Inequality> inequality_from_string(std::string_view s) {
  if (s == "bernstein") return Inequality::Bernstein;
  if (s == "hoeffding") return Inequality::Hoeffding;
  if (s == "chebyshev") return Inequality::Chebyshev;
  if (s == "chebyshev-cantelli") return Inequality::ChebyshevCantelli;
  if (s == "chernoff") return Inequality::Chernoff;
  if (s == "reverse-chernoff") return Inequality::ReverseChernoff;
  if (s == "bhatia-davis") return Inequality::BhatiaDavis;
  return std::nullopt;
}

inline BoundValue bound_value(Inequality which, const BoundParams& q) {
  auto get = [](const std::optional<double>& v, const char* name) {
    if (!v) throw DomainError(std::string("missing parameter ") + name);
    return *v;
  };
  // braced lists evaluate left to right, so the first missing name is reported
  switch (which) {
    case Inequality::Bernstein: {
      const auto [t, alpha, var] = std::array{get(q.t, "t"), get(q.alpha, "alpha"), get(q.sum_variance, "sum_variance")};
      return bernstein_bound(t, alpha, var);
    }
    case Inequality::Hoeffding: {
      const auto [t, ranges] = std::array{get(q.t, "t"), get(q.sum_range_squares, "sum_range_squares")};
      return hoeffding_bound(t, ranges);
    }
    case Inequality::Chebyshev: {
      const auto [var, t] = std::array{get(q.variance, "variance"), get(q.t, "t")};
      return chebyshev_bound(var, t);
    }
    case Inequality::ChebyshevCantelli:
      return chebyshev_cantelli_bound(get(q.t, "t"));
    case Inequality::Chernoff: {
      const auto [eta, mu] = std::array{get(q.eta, "eta"), get(q.mu, "mu")};
      return chernoff_bound(eta, mu);
    }
    case Inequality::ReverseChernoff: {
      const auto [eta, p, k] = std::array{get(q.eta, "eta"), get(q.p, "p"), get(q.k, "k")};
      return reverse_chernoff_bound(eta, p, k);
    }
    case Inequality::BhatiaDavis: {
      const auto [alpha, beta, mu] = std::array{get(q.alpha, "alpha"), get(q.beta, "beta"), get(q.mu, "mu")};
      return bhatia_davis_bound(alpha, beta, mu);
    }
  }
  throw DomainError("unknown inequality");
}

}  // namespace rsdlab
