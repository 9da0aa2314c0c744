#pragma once

#include "core.hpp"
#include "exact_oracle.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

// Encoding of an abstract profile as a value or metric instance whose exact
// expected objective, times n!, spells out every lottery count in its own
// block of q = ceil(log2(n!+1)) bits.
//
//   value:   v_i(r_i(j)) = 2^((i n - j) q)
//   metric:  c_i(r_i(j)) = 2^(n^2 q) + 2^(((i-1) n + j - 1) q)
//
// Counts are indexed (agent i, rank j), both 1-based in the formulas.

namespace rsdlab {

/// q = bit length of n!, which equals ceil(log2(n! + 1)).
inline unsigned block_bits(int n) { return bit_length(factorial(n)); }

/// Bit offset of the (agent, rank) block, both 1-based.
inline std::uint64_t block_offset(int n, Setting setting, int agent, int rank) {
  const std::uint64_t q = block_bits(n);
  const auto i = static_cast<std::uint64_t>(agent), j = static_cast<std::uint64_t>(rank),
             nn = static_cast<std::uint64_t>(n);
  if (setting == Setting::Value) return (i * nn - j) * q;
  if (setting == Setting::Metric) return ((i - 1) * nn + j - 1) * q;
  throw std::invalid_argument("reduction target must be value or metric");
}

// Function: build_reduction
inline AssignmentInstance build_reduction(const AssignmentInstance& source, Setting setting) {
  if (source.setting() != Setting::Abstract) throw std::invalid_argument("reduction source must be abstract");
  require_valid(source);
  if (setting == Setting::Abstract) throw std::invalid_argument("reduction target must be value or metric");
  const int n = source.n();
  const auto base = BigInt(1) << (static_cast<unsigned>(n) * n * block_bits(n));
  RationalMatrix M(n, std::vector<Rational>(n));
  for (int i = 1; i <= n; ++i) {
    const Ranking& r = source.rankings()[i - 1];
    for (int j = 1; j <= n; ++j) {
      BigInt entry = BigInt(1) << static_cast<unsigned>(block_offset(n, setting, i, j));
      if (setting == Setting::Metric) entry += base;
      M[i - 1][r[j - 1] - 1] = Rational(entry);
    }
  }
  return setting == Setting::Value ? AssignmentInstance::with_values(std::move(M))
                                   : AssignmentInstance::with_costs(std::move(M));
}

// Function: exact_scaled_total
//
// n! * E[objective] = sum over all orderings of the SD objective, as an
// integer.
inline BigInt exact_scaled_total(const AssignmentInstance& built, Objective obj, const EnumerateOptions& opts = {}) {
  auto summary = enumerate(built, obj, opts);
  if (denominator(summary.total) != 1)
    throw std::invalid_argument("instance payoffs are not integers; scaled total is fractional");
  return numerator(summary.total);
}

struct DecodedL {
  CountMatrix L;                  // (agent, rank)
  std::optional<BigInt> top_block;  // metric only: bits at and above n^2 q
};

// Function: decode_L
//
// Reads each q-bit block. The metric top block is reported as is and never
// used for the counts.
inline DecodedL decode_L(const BigInt& scaled_total, int n, Setting setting) {
  if (scaled_total < 0) throw std::invalid_argument("scaled total must be non-negative");
  if (n < 1) throw std::invalid_argument("n must be at least 1");
  const unsigned q = block_bits(n);
  const BigInt mask = (BigInt(1) << q) - 1;
  DecodedL out;
  out.L.assign(n, std::vector<std::uint64_t>(n, 0));
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j) {
      BigInt slice = (scaled_total >> static_cast<unsigned>(block_offset(n, setting, i, j))) & mask;
      out.L[i - 1][j - 1] = slice.convert_to<std::uint64_t>();
    }
  if (setting == Setting::Metric) out.top_block = scaled_total >> (static_cast<unsigned>(n) * n * q);
  return out;
}

// Function: lottery_from_L
//
// P[i][r_i(j)] = L[i][j] / n!. A row not summing to n! means the decode is
// corrupt.
inline RationalMatrix lottery_from_L(const CountMatrix& decoded, const AssignmentInstance& source) {
  const int n = source.n();
  const BigInt nf = factorial(n);
  if (static_cast<int>(decoded.size()) != n) throw std::invalid_argument("decoded L has wrong row count");
  RationalMatrix P(n, std::vector<Rational>(n, 0));
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(decoded[i].size()) != n) throw std::invalid_argument("decoded L has wrong column count");
    BigInt row = 0;
    for (auto c : decoded[i]) row += c;
    if (row != nf)
      throw std::runtime_error("corrupted decode: row " + std::to_string(i + 1) + " of L sums to " + row.str() +
                               ", expected " + nf.str());
    const Ranking& r = source.rankings()[i];
    for (int j = 0; j < n; ++j) P[i][r[j] - 1] = Rational(BigInt(decoded[i][j]), nf);
  }
  return P;
}

/// Re-index an agent x item count matrix to agent x rank.
inline CountMatrix counts_by_rank(const CountMatrix& by_item, const AssignmentInstance& source) {
  const int n = source.n();
  CountMatrix out(n, std::vector<std::uint64_t>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out[i][j] = by_item[i][source.rankings()[i][j] - 1];
  return out;
}

struct ReductionArtifact {
  AssignmentInstance source;
  Setting setting;
  unsigned q = 0;
  AssignmentInstance built;
  BigInt scaled_total;
  CountMatrix decoded_L;
  std::optional<BigInt> top_block;
  CountMatrix oracle_L;  // (agent, rank), from enumerating the built instance
  bool round_trip = false;
};

// Function: run_reduction
//
// Build, total, decode, and compare the decoded counts with direct
// enumeration of the built instance.
inline ReductionArtifact run_reduction(const AssignmentInstance& source, Setting setting,
                                       const EnumerateOptions& opts = {}) {
  AssignmentInstance built = build_reduction(source, setting);
  const Objective obj = setting == Setting::Value ? Objective::Welfare : Objective::Cost;
  auto summary = enumerate(built, obj, opts);
  if (denominator(summary.total) != 1) throw std::logic_error("reduction produced a fractional total");
  BigInt total = numerator(summary.total);
  DecodedL decoded = decode_L(total, source.n(), setting);
  CountMatrix oracle = counts_by_rank(summary.L, source);
  const bool same = decoded.L == oracle;
  return ReductionArtifact{source, setting, block_bits(source.n()), std::move(built), std::move(total),
                           std::move(decoded.L), std::move(decoded.top_block), std::move(oracle), same};
}

}  // namespace rsdlab
