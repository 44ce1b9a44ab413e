#pragma once

#include <algorithm>
#include <vector>

#include "hnflow/rational.hpp"

namespace hnflow {

/// Closed interval with exact rational endpoints. Endpoint arithmetic is
/// exact, so no outward rounding is needed; used for real root isolation
/// and for enclosing number-field embeddings before handing off to MPFR.
struct RatInterval {
  Rat lo, hi;

  RatInterval() : lo(0), hi(0) {}
  RatInterval(Rat l, Rat h) : lo(std::move(l)), hi(std::move(h)) {
    if (hi < lo) throw std::invalid_argument("RatInterval: hi < lo");
  }
  static RatInterval point(const Rat& r) { return RatInterval(r, r); }

  Rat width() const { return hi - lo; }
  Rat mid() const { return (lo + hi) / Rat(2); }
  bool contains(const Rat& r) const { return lo <= r && r <= hi; }
  bool containsZero() const { return lo.sign() <= 0 && hi.sign() >= 0; }

  RatInterval operator-() const { return RatInterval(-hi, -lo); }

  friend RatInterval operator+(const RatInterval& a, const RatInterval& b) {
    return RatInterval(a.lo + b.lo, a.hi + b.hi);
  }
  friend RatInterval operator-(const RatInterval& a, const RatInterval& b) {
    return RatInterval(a.lo - b.hi, a.hi - b.lo);
  }
  friend RatInterval operator*(const RatInterval& a, const RatInterval& b) {
    Rat p1 = a.lo * b.lo, p2 = a.lo * b.hi, p3 = a.hi * b.lo, p4 = a.hi * b.hi;
    Rat lo = std::min(std::min(p1, p2), std::min(p3, p4));
    Rat hi = std::max(std::max(p1, p2), std::max(p3, p4));
    return RatInterval(lo, hi);
  }
  friend RatInterval operator*(const Rat& c, const RatInterval& a) {
    return c.sign() >= 0 ? RatInterval(c * a.lo, c * a.hi) : RatInterval(c * a.hi, c * a.lo);
  }
  /// Requires 0 not in b.
  friend RatInterval operator/(const RatInterval& a, const RatInterval& b) {
    if (b.containsZero()) throw std::domain_error("RatInterval: division by interval containing 0");
    RatInterval inv(Rat(1) / b.hi, Rat(1) / b.lo);
    return a * inv;
  }

  RatInterval intersect(const RatInterval& o) const {
    Rat l = std::max(lo, o.lo), h = std::min(hi, o.hi);
    if (h < l) throw std::domain_error("RatInterval: empty intersection");
    return RatInterval(l, h);
  }
};

/// Horner evaluation of a polynomial (coeffs low-to-high) over an interval.
inline RatInterval evalPolyInterval(const std::vector<Rat>& coeffs, const RatInterval& x) {
  RatInterval acc = RatInterval::point(Rat(0));
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it)
    acc = acc * x + RatInterval::point(*it);
  return acc;
}

inline Rat evalPoly(const std::vector<Rat>& coeffs, const Rat& x) {
  Rat acc(0);
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * x + *it;
  return acc;
}

}  // namespace hnflow
