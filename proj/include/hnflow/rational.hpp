#pragma once

#include <gmpxx.h>

#include <cctype>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace hnflow {

using Int = mpz_class;

/// Arbitrary-precision rational, always reduced (gcd(num,den)=1, den>0).
/// Thin value wrapper over mpq_class so that operators return plain values
/// (no expression templates leaking into Eigen).
class Rat {
 public:
  Rat() : v_(0) {}
  Rat(long n) : v_(n) {}                       // NOLINT(google-explicit-constructor)
  Rat(int n) : v_(static_cast<long>(n)) {}     // NOLINT(google-explicit-constructor)
  Rat(const Int& n) : v_(n) {}                 // NOLINT(google-explicit-constructor)
  Rat(const Int& num, const Int& den) : v_(num, den) {
    if (den == 0) throw std::domain_error("Rat: zero denominator");
    v_.canonicalize();
  }
  Rat(long num, long den) : v_(num, den) {
    if (den == 0) throw std::domain_error("Rat: zero denominator");
    v_.canonicalize();
  }
  explicit Rat(const mpq_class& q) : v_(q) { v_.canonicalize(); }

  /// Parses "p", "-p/q" or decimal-free literals; whitespace allowed around '/'.
  static Rat fromString(const std::string& s);

  const mpq_class& raw() const { return v_; }
  Int num() const { return Int(v_.get_num()); }
  Int den() const { return Int(v_.get_den()); }

  bool isZero() const { return sgn(v_) == 0; }
  int sign() const { return sgn(v_); }

  Rat operator-() const { return Rat(mpq_class(-v_)); }
  Rat& operator+=(const Rat& o) { v_ += o.v_; return *this; }
  Rat& operator-=(const Rat& o) { v_ -= o.v_; return *this; }
  Rat& operator*=(const Rat& o) { v_ *= o.v_; return *this; }
  Rat& operator/=(const Rat& o) {
    if (o.isZero()) throw std::domain_error("Rat: division by zero");
    v_ /= o.v_;
    return *this;
  }

  friend Rat operator+(Rat a, const Rat& b) { return a += b; }
  friend Rat operator-(Rat a, const Rat& b) { return a -= b; }
  friend Rat operator*(Rat a, const Rat& b) { return a *= b; }
  friend Rat operator/(Rat a, const Rat& b) { return a /= b; }

  friend bool operator==(const Rat& a, const Rat& b) { return a.v_ == b.v_; }
  friend bool operator!=(const Rat& a, const Rat& b) { return a.v_ != b.v_; }
  friend bool operator<(const Rat& a, const Rat& b) { return a.v_ < b.v_; }
  friend bool operator<=(const Rat& a, const Rat& b) { return a.v_ <= b.v_; }
  friend bool operator>(const Rat& a, const Rat& b) { return a.v_ > b.v_; }
  friend bool operator>=(const Rat& a, const Rat& b) { return a.v_ >= b.v_; }

  Rat abs() const { return sign() < 0 ? -*this : *this; }

  /// Largest integer <= value.
  Int floor() const {
    Int q;
    mpz_fdiv_q(q.get_mpz_t(), v_.get_num().get_mpz_t(), v_.get_den().get_mpz_t());
    return q;
  }
  Int ceil() const {
    Int q;
    mpz_cdiv_q(q.get_mpz_t(), v_.get_num().get_mpz_t(), v_.get_den().get_mpz_t());
    return q;
  }
  /// Nearest integer, ties away from zero.
  Int roundNearest() const {
    Rat shifted = *this + Rat(sign() >= 0 ? 1 : -1, 2);
    return sign() >= 0 ? shifted.floor() : shifted.ceil();
  }

  bool isInteger() const { return v_.get_den() == 1; }

  double toDouble() const { return v_.get_d(); }

  Rat pow(long e) const {
    if (e == 0) return Rat(1);
    Rat base = e > 0 ? *this : Rat(1) / *this;
    unsigned long k = static_cast<unsigned long>(e > 0 ? e : -e);
    mpq_class r;
    mpz_pow_ui(mpq_numref(r.get_mpq_t()), mpq_numref(base.v_.get_mpq_t()), k);
    mpz_pow_ui(mpq_denref(r.get_mpq_t()), mpq_denref(base.v_.get_mpq_t()), k);
    return Rat(r);  // powers of a reduced fraction stay reduced
  }

  std::string str() const {
    if (v_.get_den() == 1) return v_.get_num().get_str();
    return v_.get_num().get_str() + "/" + v_.get_den().get_str();
  }

 private:
  mpq_class v_;
};

inline Rat Rat::fromString(const std::string& s) {
  std::string t;
  t.reserve(s.size());
  for (char c : s)
    if (!std::isspace(static_cast<unsigned char>(c))) t.push_back(c);
  if (t.empty()) throw std::invalid_argument("Rat: empty literal");
  mpq_class q;
  if (q.set_str(t, 10) != 0) throw std::invalid_argument("Rat: bad literal '" + s + "'");
  if (q.get_den() == 0) throw std::domain_error("Rat: zero denominator in '" + s + "'");
  q.canonicalize();
  return Rat(q);
}

inline Rat abs(const Rat& r) { return r.abs(); }

inline std::string to_string(const Rat& r) { return r.str(); }

inline Int binomial(int n, int k) {
  if (k < 0 || k > n) return Int(0);
  Int r;
  mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return r;
}

}  // namespace hnflow
