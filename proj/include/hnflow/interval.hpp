#pragma once

#include <mpfr.h>

#include <string>

#include "hnflow/rat_interval.hpp"
#include "hnflow/rational.hpp"

namespace hnflow {

class PrecisionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Closed real interval with MPFR endpoints, lower endpoint rounded down
/// and upper endpoint rounded up in every operation, so the true value is
/// always enclosed. Each value carries its own working precision.
class RInterval {
 public:
  explicit RInterval(mpfr_prec_t prec = 64);
  RInterval(const RInterval& o);
  RInterval(RInterval&& o) noexcept;
  RInterval& operator=(const RInterval& o);
  RInterval& operator=(RInterval&& o) noexcept;
  ~RInterval();

  static RInterval fromLong(long v, mpfr_prec_t prec);
  static RInterval fromInt(const Int& v, mpfr_prec_t prec);
  static RInterval fromRat(const Rat& v, mpfr_prec_t prec);
  static RInterval fromRatInterval(const RatInterval& iv, mpfr_prec_t prec);

  mpfr_prec_t prec() const { return prec_; }
  const mpfr_t& lo() const { return lo_; }
  const mpfr_t& hi() const { return hi_; }

  bool containsZero() const;
  bool isExactZero() const;
  int signLo() const { return mpfr_sgn(lo_); }
  int signHi() const { return mpfr_sgn(hi_); }

  double midDouble() const;
  double loDouble() const;
  double hiDouble() const;
  /// Width as a double (upper bound).
  double widthDouble() const;
  /// width / max(1, |mid|), as a double.
  double relWidthDouble() const;

  RInterval operator-() const;
  friend RInterval operator+(const RInterval& a, const RInterval& b);
  friend RInterval operator-(const RInterval& a, const RInterval& b);
  friend RInterval operator*(const RInterval& a, const RInterval& b);
  friend RInterval operator/(const RInterval& a, const RInterval& b);
  RInterval& operator+=(const RInterval& o) { return *this = *this + o; }
  RInterval& operator-=(const RInterval& o) { return *this = *this - o; }
  RInterval& operator*=(const RInterval& o) { return *this = *this * o; }

  RInterval abs() const;
  /// Square of the interval (tight around 0).
  RInterval square() const;
  /// Requires lo >= 0 (clamps tiny negative lo to 0 is NOT done; throws).
  RInterval sqrt() const;
  /// Requires lo > 0.
  RInterval log() const;
  RInterval exp() const;
  RInterval mulPow2(long e) const;  // exact scaling by 2^e

  /// exp(r) for exact rational r at the given precision.
  static RInterval expOfRat(const Rat& r, mpfr_prec_t prec);
  /// log of an exact positive rational.
  static RInterval logOfRat(const Rat& r, mpfr_prec_t prec);

  /// True when a.hi < b.lo (a certainly below b).
  static bool certainlyLess(const RInterval& a, const RInterval& b);
  /// True when a.hi <= b.lo.
  static bool certainlyLeq(const RInterval& a, const RInterval& b);
  static bool overlaps(const RInterval& a, const RInterval& b);

  /// Nearest integer to the midpoint.
  long roundMidToLong() const;

  std::string str(int digits = 20) const;

 private:
  mpfr_t lo_, hi_;
  mpfr_prec_t prec_;
};

}  // namespace hnflow
