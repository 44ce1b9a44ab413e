#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "hnflow/eigen_support.hpp"
#include "hnflow/field_traits.hpp"
#include "hnflow/flow.hpp"
#include "hnflow/number_field.hpp"

namespace hnflow {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parsed run configuration. The raw JSON is kept for digesting; the field
/// declaration (if any) selects the scalar type at dispatch time.
struct RunConfig {
  nlohmann::json raw;
  FieldPtr field;  // null = plain rationals
  int dim = 0;
  std::uint64_t seed = 0;

  static RunConfig fromFile(const std::string& path);
  static RunConfig fromJson(nlohmann::json j);

  bool has(const std::string& key) const { return raw.contains(key); }
};

/// Scalar literal: rationals as "p/q"; with a declared field, polynomial
/// expressions in the field symbol, e.g. "1 + 2*t" or "t^2 - 1".
NFElem parseScalarExpr(const std::string& text, const FieldPtr& field);

/// Typed literal parse: K = Rat rejects field symbols.
template <class K>
K parseScalar(const std::string& text, const FieldPtr& field);

template <>
inline Rat parseScalar<Rat>(const std::string& text, const FieldPtr& field) {
  NFElem e = parseScalarExpr(text, field);
  if (!e.isRational()) throw ConfigError("rational scalar expected, got '" + text + "'");
  return e.rational();
}

template <>
inline NFElem parseScalar<NFElem>(const std::string& text, const FieldPtr& field) {
  return parseScalarExpr(text, field);
}

Rat parseRatField(const nlohmann::json& j, const std::string& what);

template <class K>
Matrix<K> parseMatrix(const nlohmann::json& rows, const FieldPtr& field, const std::string& what) {
  if (!rows.is_array() || rows.empty()) throw ConfigError(what + ": matrix rows expected");
  const int r = static_cast<int>(rows.size());
  const int c = static_cast<int>(rows[0].size());
  Matrix<K> m(r, c);
  for (int i = 0; i < r; ++i) {
    if (static_cast<int>(rows[i].size()) != c) throw ConfigError(what + ": ragged matrix");
    for (int j = 0; j < c; ++j)
      m(i, j) = parseScalar<K>(rows[i][j].get<std::string>(), field);
  }
  return m;
}

Flow parseFlow(const nlohmann::json& weights, const std::string& what);

/// Canonical serialization used for the inputs digest (sorted keys, no
/// whitespace variation) and the FNV-1a 64 digest over it.
std::string canonicalJson(const nlohmann::json& j);
std::string digestHex(const std::string& payload);

}  // namespace hnflow
