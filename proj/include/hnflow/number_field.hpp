#pragma once

#include <memory>
#include <string>
#include <vector>

#include "hnflow/rat_interval.hpp"
#include "hnflow/rational.hpp"

namespace hnflow {

class FieldError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A real number field Q(theta) given by a monic minimal polynomial and an
/// isolating interval for the chosen real root. Construction verifies that
/// the interval isolates exactly one real root (Sturm count) and, for
/// degree <= 3, that the polynomial is irreducible over Q (no rational
/// root). Higher degrees require trusted=true.
class NumberField {
 public:
  /// coeffs: c_0..c_deg low-to-high, monic (c_deg = 1), deg >= 1.
  NumberField(std::vector<Rat> coeffs, RatInterval isolating, std::string symbol,
              bool trusted = false);

  int degree() const { return static_cast<int>(minpoly_.size()) - 1; }
  const std::vector<Rat>& minpoly() const { return minpoly_; }
  const RatInterval& isolatingInterval() const { return isolating_; }
  const std::string& symbol() const { return symbol_; }
  bool trusted() const { return trusted_; }

  /// reduction_[k] expresses theta^(deg+k) in the power basis, k = 0..deg-2.
  const std::vector<std::vector<Rat>>& reductionTable() const { return reduction_; }

  /// Shrinks an isolating interval for theta until width <= eps.
  /// Bisection with an interval-Newton contraction when the derivative
  /// enclosure excludes zero.
  RatInterval refine(RatInterval iv, const Rat& eps) const;

  /// Enclosure of theta with width <= eps, starting from the stored interval.
  RatInterval thetaEnclosure(const Rat& eps) const { return refine(isolating_, eps); }

  /// Sign of the minimal polynomial at a rational point (exact).
  int signAt(const Rat& x) const { return evalPoly(minpoly_, x).sign(); }

  bool sameField(const NumberField& o) const;

 private:
  std::vector<Rat> minpoly_;
  std::vector<Rat> derivative_;
  RatInterval isolating_;
  std::string symbol_;
  bool trusted_;
  std::vector<std::vector<Rat>> reduction_;

  void verifyIsolation() const;
  void verifyIrreducible() const;
  void buildReductionTable();
};

using FieldPtr = std::shared_ptr<const NumberField>;

/// Number of real roots of poly in (lo, hi] via Sturm sequences (exact).
int sturmRootCount(const std::vector<Rat>& poly, const Rat& lo, const Rat& hi);

/// Element of Q or of a declared real number field. A value with a null
/// field pointer is a plain rational; rationals embed into any field on
/// contact, and results whose higher coordinates vanish are demoted back to
/// plain rationals, so every value has a unique representation and
/// operator== is structural equality.
class NFElem {
 public:
  NFElem() : coords_{Rat(0)} {}
  NFElem(long n) : coords_{Rat(n)} {}       // NOLINT(google-explicit-constructor)
  NFElem(int n) : coords_{Rat(n)} {}        // NOLINT(google-explicit-constructor)
  NFElem(const Rat& r) : coords_{r} {}      // NOLINT(google-explicit-constructor)
  NFElem(FieldPtr field, std::vector<Rat> coords);

  /// theta itself, as an element of the field.
  static NFElem generator(const FieldPtr& field);

  bool isRational() const { return field_ == nullptr; }
  const FieldPtr& field() const { return field_; }
  const std::vector<Rat>& coords() const { return coords_; }
  /// The rational value; requires isRational().
  const Rat& rational() const;

  bool isZero() const;

  NFElem operator-() const;
  NFElem& operator+=(const NFElem& o) { return *this = *this + o; }
  NFElem& operator-=(const NFElem& o) { return *this = *this - o; }
  NFElem& operator*=(const NFElem& o) { return *this = *this * o; }
  NFElem& operator/=(const NFElem& o) { return *this = *this / o; }

  friend NFElem operator+(const NFElem& a, const NFElem& b);
  friend NFElem operator-(const NFElem& a, const NFElem& b);
  friend NFElem operator*(const NFElem& a, const NFElem& b);
  friend NFElem operator/(const NFElem& a, const NFElem& b);

  friend bool operator==(const NFElem& a, const NFElem& b);
  friend bool operator!=(const NFElem& a, const NFElem& b) { return !(a == b); }
  /// Arbitrary total order (context, then coord lex); used for canonical
  /// containers, not for the real embedding.
  friend bool operator<(const NFElem& a, const NFElem& b);

  /// Exact rational enclosure of the real embedding, width <= 2^-bits.
  /// Exact zero is returned as the point interval [0,0].
  RatInterval enclosure(int bits) const;

  /// Sign of the real embedding (exact zero test first, then refinement).
  int signReal() const;

  double toDouble() const;

  std::string str() const;

 private:
  FieldPtr field_;             // null = plain rational
  std::vector<Rat> coords_;    // size 1 if rational, else degree()

  void demote();
  static FieldPtr mergedField(const NFElem& a, const NFElem& b);
  std::vector<Rat> lifted(int deg) const;
};

inline NFElem abs(const NFElem& x) { return x.signReal() < 0 ? -x : x; }
inline std::string to_string(const NFElem& x) { return x.str(); }

}  // namespace hnflow
