#pragma once

#include "core.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

// Instance files (UTF-8 JSON):
//
//   {"n": 3, "setting": "value",    "values": [[...], ...]}
//   {"n": 3, "setting": "metric",   "costs": [[...], ...]}
//   {"n": 3, "setting": "metric",   "agent_points": [...], "item_points": [...]}
//   {"n": 3, "setting": "abstract", "rankings": [[...], ...]}
//
// Numbers are JSON integers or strings holding an integer, a decimal
// ("0.125") or a fraction ("1/3"); all are read exactly. Bare JSON floats are
// refused because their text is lost to binary rounding on parse.

namespace rsdlab {

class InstanceFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

using json = nlohmann::json;

inline Rational read_number(const json& j, const std::string& path) {
  if (j.is_number_integer()) {
    if (j.is_number_unsigned()) return Rational(BigInt(j.get<std::uint64_t>()));
    return Rational(BigInt(j.get<std::int64_t>()));
  }
  if (j.is_string()) {
    try {
      return parse_rational(j.get<std::string>());
    } catch (const ParseError& e) {
      throw InstanceFormatError(path + ": " + e.what());
    }
  }
  if (j.is_number_float())
    throw InstanceFormatError(path + ": non-integer numbers must be quoted (\"0.25\") so they are read exactly");
  throw InstanceFormatError(path + ": expected a number, got " + std::string(j.type_name()));
}

inline std::vector<Rational> read_vector(const json& j, const std::string& path) {
  if (!j.is_array()) throw InstanceFormatError(path + ": expected an array");
  std::vector<Rational> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(read_number(j[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

inline RationalMatrix read_matrix(const json& j, const std::string& path) {
  if (!j.is_array()) throw InstanceFormatError(path + ": expected an array of rows");
  RationalMatrix out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(read_vector(j[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

inline const json& require_field(const json& doc, const char* name) {
  auto it = doc.find(name);
  if (it == doc.end()) throw InstanceFormatError(std::string("missing field \"") + name + "\"");
  return *it;
}

// Integers that fit 64 bits are written bare, everything else as a string:
// a terminating decimal when the denominator allows it, else "p/q".
inline json write_number(const Rational& x) {
  if (denominator(x) == 1) {
    const BigInt& v = numerator(x);
    if (v >= std::numeric_limits<std::int64_t>::min() && v <= std::numeric_limits<std::int64_t>::max())
      return json(v.convert_to<std::int64_t>());
    return json(v.str());
  }
  BigInt den = denominator(x);
  unsigned twos = 0, fives = 0;
  while (den % 2 == 0) den /= 2, ++twos;
  while (den % 5 == 0) den /= 5, ++fives;
  if (den != 1) return json(to_fraction_string(x));
  const unsigned places = std::max(twos, fives);
  BigInt scale = boost::multiprecision::pow(BigInt(10), places);
  BigInt scaled = numerator(x) * scale / denominator(x);
  const bool negative = scaled < 0;
  if (negative) scaled = -scaled;
  std::string digits = scaled.str();
  if (digits.size() <= places) digits.insert(0, places - digits.size() + 1, '0');
  digits.insert(digits.size() - places, ".");
  return json((negative ? "-" : "") + digits);
}

inline std::pair<std::size_t, std::size_t> line_and_column(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

}  // namespace detail

// Function: parse_instance
//
// Structural problems (bad JSON, wrong types, missing fields) throw
// InstanceFormatError with a line/column or field path. Content problems
// (negative entries, wrong sizes, triangle failures) are left to validate().
inline AssignmentInstance parse_instance(const std::string& text) {
  using detail::json;
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    auto [line, col] = detail::line_and_column(text, e.byte == 0 ? 0 : e.byte - 1);
    throw InstanceFormatError("line " + std::to_string(line) + ", column " + std::to_string(col) +
                              ": malformed JSON (" + e.what() + ")");
  }
  if (!doc.is_object()) throw InstanceFormatError("top level must be a JSON object");

  const json& jn = detail::require_field(doc, "n");
  if (!jn.is_number_integer()) throw InstanceFormatError("n: expected an integer");
  const auto n = jn.get<std::int64_t>();
  if (n < 1 || n > 1'000'000) throw InstanceFormatError("n: must be a positive integer, got " + std::to_string(n));

  const json& js = detail::require_field(doc, "setting");
  if (!js.is_string()) throw InstanceFormatError("setting: expected a string");
  const std::string setting = js.get<std::string>();
  const int size = static_cast<int>(n);

  if (setting == "value") return AssignmentInstance::with_values(detail::read_matrix(detail::require_field(doc, "values"), "values"), size);
  if (setting == "metric") {
    if (doc.contains("costs")) {
      if (doc.contains("agent_points") || doc.contains("item_points"))
        throw InstanceFormatError("give either \"costs\" or \"agent_points\"/\"item_points\", not both");
      return AssignmentInstance::with_costs(detail::read_matrix(doc["costs"], "costs"), size);
    }
    if (doc.contains("agent_points") || doc.contains("item_points"))
      return AssignmentInstance::on_line(
          detail::read_vector(detail::require_field(doc, "agent_points"), "agent_points"),
          detail::read_vector(detail::require_field(doc, "item_points"), "item_points"), size);
    throw InstanceFormatError("metric instance needs \"costs\" or \"agent_points\" and \"item_points\"");
  }
  if (setting == "abstract") {
    const json& jr = detail::require_field(doc, "rankings");
    if (!jr.is_array()) throw InstanceFormatError("rankings: expected an array of rankings");
    std::vector<Ranking> rankings;
    for (std::size_t i = 0; i < jr.size(); ++i) {
      const std::string path = "rankings[" + std::to_string(i) + "]";
      if (!jr[i].is_array()) throw InstanceFormatError(path + ": expected an array of item indices");
      Ranking r;
      for (std::size_t t = 0; t < jr[i].size(); ++t) {
        if (!jr[i][t].is_number_integer())
          throw InstanceFormatError(path + "[" + std::to_string(t) + "]: expected an integer item index");
        auto v = jr[i][t].get<std::int64_t>();
        r.push_back(v < -1'000'000 || v > 1'000'000 ? -1 : static_cast<int>(v));
      }
      rankings.push_back(std::move(r));
    }
    return AssignmentInstance::with_rankings(std::move(rankings), size);
  }
  throw InstanceFormatError("setting: expected \"value\", \"metric\" or \"abstract\", got \"" + setting + "\"");
}

inline AssignmentInstance read_instance_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InstanceFormatError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_instance(buf.str());
  } catch (const InstanceFormatError& e) {
    throw InstanceFormatError(path + ": " + e.what());
  }
}

inline nlohmann::json instance_to_json(const AssignmentInstance& I) {
  using detail::json;
  json doc;
  doc["n"] = I.n();
  doc["setting"] = to_string(I.setting());
  auto vec = [](const std::vector<Rational>& xs) {
    json a = json::array();
    for (const auto& x : xs) a.push_back(detail::write_number(x));
    return a;
  };
  switch (I.setting()) {
    case Setting::Abstract:
      doc["rankings"] = I.rankings();
      break;
    case Setting::Metric:
      if (const auto& pts = I.points()) {
        doc["agent_points"] = vec(pts->agents);
        doc["item_points"] = vec(pts->items);
        break;
      }
      [[fallthrough]];
    case Setting::Value: {
      json rows = json::array();
      for (const auto& row : I.matrix()) rows.push_back(vec(row));
      doc[I.setting() == Setting::Value ? "values" : "costs"] = std::move(rows);
      break;
    }
  }
  return doc;
}

inline std::string write_instance(const AssignmentInstance& I) { return instance_to_json(I).dump(2) + "\n"; }

}  // namespace rsdlab
