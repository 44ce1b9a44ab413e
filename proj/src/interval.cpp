#include "hnflow/interval.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace hnflow {

RInterval::RInterval(mpfr_prec_t prec) : prec_(prec) {
  mpfr_init2(lo_, prec_);
  mpfr_init2(hi_, prec_);
  mpfr_set_zero(lo_, 1);
  mpfr_set_zero(hi_, 1);
}

RInterval::RInterval(const RInterval& o) : prec_(o.prec_) {
  mpfr_init2(lo_, prec_);
  mpfr_init2(hi_, prec_);
  mpfr_set(lo_, o.lo_, MPFR_RNDD);
  mpfr_set(hi_, o.hi_, MPFR_RNDU);
}

RInterval::RInterval(RInterval&& o) noexcept : prec_(o.prec_) {
  lo_[0] = o.lo_[0];
  hi_[0] = o.hi_[0];
  // leave o in a destructible state
  mpfr_init2(o.lo_, 2);
  mpfr_init2(o.hi_, 2);
}

RInterval& RInterval::operator=(const RInterval& o) {
  if (this == &o) return *this;
  if (prec_ != o.prec_) {
    mpfr_set_prec(lo_, o.prec_);
    mpfr_set_prec(hi_, o.prec_);
    prec_ = o.prec_;
  }
  mpfr_set(lo_, o.lo_, MPFR_RNDD);
  mpfr_set(hi_, o.hi_, MPFR_RNDU);
  return *this;
}

RInterval& RInterval::operator=(RInterval&& o) noexcept {
  std::swap(lo_[0], o.lo_[0]);
  std::swap(hi_[0], o.hi_[0]);
  std::swap(prec_, o.prec_);
  return *this;
}

RInterval::~RInterval() {
  mpfr_clear(lo_);
  mpfr_clear(hi_);
}

RInterval RInterval::fromLong(long v, mpfr_prec_t prec) {
  RInterval r(prec);
  mpfr_set_si(r.lo_, v, MPFR_RNDD);
  mpfr_set_si(r.hi_, v, MPFR_RNDU);
  return r;
}

RInterval RInterval::fromInt(const Int& v, mpfr_prec_t prec) {
  RInterval r(prec);
  mpfr_set_z(r.lo_, v.get_mpz_t(), MPFR_RNDD);
  mpfr_set_z(r.hi_, v.get_mpz_t(), MPFR_RNDU);
  return r;
}

RInterval RInterval::fromRat(const Rat& v, mpfr_prec_t prec) {
  RInterval r(prec);
  mpfr_set_q(r.lo_, v.raw().get_mpq_t(), MPFR_RNDD);
  mpfr_set_q(r.hi_, v.raw().get_mpq_t(), MPFR_RNDU);
  return r;
}

RInterval RInterval::fromRatInterval(const RatInterval& iv, mpfr_prec_t prec) {
  RInterval r(prec);
  mpfr_set_q(r.lo_, iv.lo.raw().get_mpq_t(), MPFR_RNDD);
  mpfr_set_q(r.hi_, iv.hi.raw().get_mpq_t(), MPFR_RNDU);
  return r;
}

bool RInterval::containsZero() const { return mpfr_sgn(lo_) <= 0 && mpfr_sgn(hi_) >= 0; }

bool RInterval::isExactZero() const { return mpfr_zero_p(lo_) && mpfr_zero_p(hi_); }

double RInterval::midDouble() const {
  double a = mpfr_get_d(lo_, MPFR_RNDN), b = mpfr_get_d(hi_, MPFR_RNDN);
  return 0.5 * (a + b);
}
double RInterval::loDouble() const { return mpfr_get_d(lo_, MPFR_RNDD); }
double RInterval::hiDouble() const { return mpfr_get_d(hi_, MPFR_RNDU); }

double RInterval::widthDouble() const {
  mpfr_t w;
  mpfr_init2(w, 64);
  mpfr_sub(w, hi_, lo_, MPFR_RNDU);
  double d = mpfr_get_d(w, MPFR_RNDU);
  mpfr_clear(w);
  return d;
}

double RInterval::relWidthDouble() const {
  double w = widthDouble();
  double m = std::max(1.0, std::abs(midDouble()));
  return w / m;
}

RInterval RInterval::operator-() const {
  RInterval r(prec_);
  mpfr_neg(r.lo_, hi_, MPFR_RNDD);
  mpfr_neg(r.hi_, lo_, MPFR_RNDU);
  return r;
}

RInterval operator+(const RInterval& a, const RInterval& b) {
  RInterval r(std::max(a.prec_, b.prec_));
  mpfr_add(r.lo_, a.lo_, b.lo_, MPFR_RNDD);
  mpfr_add(r.hi_, a.hi_, b.hi_, MPFR_RNDU);
  return r;
}

RInterval operator-(const RInterval& a, const RInterval& b) {
  RInterval r(std::max(a.prec_, b.prec_));
  mpfr_sub(r.lo_, a.lo_, b.hi_, MPFR_RNDD);
  mpfr_sub(r.hi_, a.hi_, b.lo_, MPFR_RNDU);
  return r;
}

RInterval operator*(const RInterval& a, const RInterval& b) {
  RInterval r(std::max(a.prec_, b.prec_));
  mpfr_t p, best_lo, best_hi;
  mpfr_init2(p, r.prec_);
  mpfr_init2(best_lo, r.prec_);
  mpfr_init2(best_hi, r.prec_);
  bool first = true;
  const mpfr_t* as[2] = {&a.lo_, &a.hi_};
  const mpfr_t* bs[2] = {&b.lo_, &b.hi_};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      mpfr_mul(p, *as[i], *bs[j], MPFR_RNDD);
      if (first || mpfr_cmp(p, best_lo) < 0) mpfr_set(best_lo, p, MPFR_RNDD);
      mpfr_mul(p, *as[i], *bs[j], MPFR_RNDU);
      if (first || mpfr_cmp(p, best_hi) > 0) mpfr_set(best_hi, p, MPFR_RNDU);
      first = false;
    }
  mpfr_set(r.lo_, best_lo, MPFR_RNDD);
  mpfr_set(r.hi_, best_hi, MPFR_RNDU);
  mpfr_clear(p);
  mpfr_clear(best_lo);
  mpfr_clear(best_hi);
  return r;
}

RInterval operator/(const RInterval& a, const RInterval& b) {
  if (b.containsZero()) throw PrecisionError("RInterval: division by interval containing zero");
  RInterval r(std::max(a.prec_, b.prec_));
  mpfr_t p, best_lo, best_hi;
  mpfr_init2(p, r.prec_);
  mpfr_init2(best_lo, r.prec_);
  mpfr_init2(best_hi, r.prec_);
  bool first = true;
  const mpfr_t* as[2] = {&a.lo_, &a.hi_};
  const mpfr_t* bs[2] = {&b.lo_, &b.hi_};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      mpfr_div(p, *as[i], *bs[j], MPFR_RNDD);
      if (first || mpfr_cmp(p, best_lo) < 0) mpfr_set(best_lo, p, MPFR_RNDD);
      mpfr_div(p, *as[i], *bs[j], MPFR_RNDU);
      if (first || mpfr_cmp(p, best_hi) > 0) mpfr_set(best_hi, p, MPFR_RNDU);
      first = false;
    }
  mpfr_set(r.lo_, best_lo, MPFR_RNDD);
  mpfr_set(r.hi_, best_hi, MPFR_RNDU);
  mpfr_clear(p);
  mpfr_clear(best_lo);
  mpfr_clear(best_hi);
  return r;
}

RInterval RInterval::abs() const {
  RInterval r(prec_);
  if (mpfr_sgn(lo_) >= 0) return *this;
  if (mpfr_sgn(hi_) <= 0) return -*this;
  // straddles zero
  mpfr_set_zero(r.lo_, 1);
  mpfr_t na;
  mpfr_init2(na, prec_);
  mpfr_neg(na, lo_, MPFR_RNDU);
  if (mpfr_cmp(na, hi_) > 0)
    mpfr_set(r.hi_, na, MPFR_RNDU);
  else
    mpfr_set(r.hi_, hi_, MPFR_RNDU);
  mpfr_clear(na);
  return r;
}

RInterval RInterval::square() const {
  RInterval a = abs();
  RInterval r(prec_);
  mpfr_sqr(r.lo_, a.lo_, MPFR_RNDD);
  mpfr_sqr(r.hi_, a.hi_, MPFR_RNDU);
  return r;
}

RInterval RInterval::sqrt() const {
  if (mpfr_sgn(lo_) < 0) throw PrecisionError("RInterval: sqrt of interval with negative lo");
  RInterval r(prec_);
  mpfr_sqrt(r.lo_, lo_, MPFR_RNDD);
  mpfr_sqrt(r.hi_, hi_, MPFR_RNDU);
  return r;
}

RInterval RInterval::log() const {
  if (mpfr_sgn(lo_) <= 0) throw PrecisionError("RInterval: log needs lo > 0");
  RInterval r(prec_);
  mpfr_log(r.lo_, lo_, MPFR_RNDD);
  mpfr_log(r.hi_, hi_, MPFR_RNDU);
  return r;
}

RInterval RInterval::exp() const {
  RInterval r(prec_);
  mpfr_exp(r.lo_, lo_, MPFR_RNDD);
  mpfr_exp(r.hi_, hi_, MPFR_RNDU);
  return r;
}

RInterval RInterval::mulPow2(long e) const {
  RInterval r(prec_);
  mpfr_mul_2si(r.lo_, lo_, e, MPFR_RNDD);
  mpfr_mul_2si(r.hi_, hi_, e, MPFR_RNDU);
  return r;
}

RInterval RInterval::expOfRat(const Rat& x, mpfr_prec_t prec) {
  RInterval r = fromRat(x, prec);
  return r.exp();
}

RInterval RInterval::logOfRat(const Rat& x, mpfr_prec_t prec) {
  if (x.sign() <= 0) throw PrecisionError("RInterval: logOfRat needs positive argument");
  RInterval r = fromRat(x, prec);
  return r.log();
}

bool RInterval::certainlyLess(const RInterval& a, const RInterval& b) {
  return mpfr_cmp(a.hi_, b.lo_) < 0;
}
bool RInterval::certainlyLeq(const RInterval& a, const RInterval& b) {
  return mpfr_cmp(a.hi_, b.lo_) <= 0;
}
bool RInterval::overlaps(const RInterval& a, const RInterval& b) {
  return !(certainlyLess(a, b) || certainlyLess(b, a));
}

long RInterval::roundMidToLong() const {
  mpfr_t m;
  mpfr_init2(m, prec_);
  mpfr_add(m, lo_, hi_, MPFR_RNDN);
  mpfr_div_2ui(m, m, 1, MPFR_RNDN);
  long v = mpfr_get_si(m, MPFR_RNDN);
  mpfr_clear(m);
  return v;
}

std::string RInterval::str(int digits) const {
  char* s1 = nullptr;
  char* s2 = nullptr;
  mpfr_asprintf(&s1, "%.*Rg", digits, lo_);
  mpfr_asprintf(&s2, "%.*Rg", digits, hi_);
  std::string out = std::string("[") + s1 + ", " + s2 + "]";
  mpfr_free_str(s1);
  mpfr_free_str(s2);
  return out;
}

}  // namespace hnflow
