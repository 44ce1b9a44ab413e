#include "hnflow/number_field.hpp"

#include <algorithm>
#include <sstream>

namespace hnflow {

namespace {

// Polynomial helpers on dense low-to-high coefficient vectors over Q.

std::vector<Rat> trim(std::vector<Rat> p) {
  while (!p.empty() && p.back().isZero()) p.pop_back();
  return p;
}

std::vector<Rat> derivativeOf(const std::vector<Rat>& p) {
  std::vector<Rat> d;
  for (size_t i = 1; i < p.size(); ++i) d.push_back(Rat(static_cast<long>(i)) * p[i]);
  return trim(std::move(d));
}

// Remainder of a by b (b nonzero).
std::vector<Rat> polyRem(std::vector<Rat> a, const std::vector<Rat>& b) {
  a = trim(std::move(a));
  while (a.size() >= b.size() && !a.empty()) {
    Rat q = a.back() / b.back();
    size_t shift = a.size() - b.size();
    for (size_t i = 0; i < b.size(); ++i) a[shift + i] -= q * b[i];
    a = trim(std::move(a));
  }
  return a;
}

}  // namespace

int sturmRootCount(const std::vector<Rat>& poly, const Rat& lo, const Rat& hi) {
  std::vector<std::vector<Rat>> chain;
  chain.push_back(trim(poly));
  chain.push_back(derivativeOf(poly));
  while (!chain.back().empty()) {
    auto r = polyRem(chain[chain.size() - 2], chain.back());
    for (auto& c : r) c = -c;
    chain.push_back(trim(std::move(r)));
  }
  chain.pop_back();

  auto signChanges = [&chain](const Rat& x) {
    int changes = 0, prev = 0;
    for (const auto& p : chain) {
      int s = evalPoly(p, x).sign();
      if (s != 0) {
        if (prev != 0 && s != prev) ++changes;
        prev = s;
      }
    }
    return changes;
  };
  return signChanges(lo) - signChanges(hi);
}

NumberField::NumberField(std::vector<Rat> coeffs, RatInterval isolating, std::string symbol,
                         bool trusted)
    : minpoly_(std::move(coeffs)),
      isolating_(std::move(isolating)),
      symbol_(std::move(symbol)),
      trusted_(trusted) {
  if (minpoly_.size() < 2) throw FieldError("NumberField: degree must be >= 1");
  if (minpoly_.back() != Rat(1)) throw FieldError("NumberField: minimal polynomial must be monic");
  if (!(isolating_.lo < isolating_.hi)) throw FieldError("NumberField: need lo < hi");
  derivative_ = derivativeOf(minpoly_);
  verifyIsolation();
  verifyIrreducible();
  buildReductionTable();
}

void NumberField::verifyIsolation() const {
  if (signAt(isolating_.lo) == 0 || signAt(isolating_.hi) == 0)
    throw FieldError("NumberField: root on isolating interval boundary");
  if (sturmRootCount(minpoly_, isolating_.lo, isolating_.hi) != 1)
    throw FieldError("NumberField: interval does not isolate exactly one real root");
}

void NumberField::verifyIrreducible() const {
  int deg = degree();
  if (deg == 1) return;
  if (deg > 3) {
    if (!trusted_)
      throw FieldError(
          "NumberField: irreducibility is only verified up to degree 3; "
          "set trusted=true to assert it");
    return;
  }
  // Degree 2 or 3: irreducible over Q iff there is no rational root.
  // Clear denominators and test all r/s with r | a0, s | a_n.
  Int lcm(1);
  for (const auto& c : minpoly_) {
    Int d = c.den();
    Int g;
    mpz_gcd(g.get_mpz_t(), lcm.get_mpz_t(), d.get_mpz_t());
    lcm = lcm / g * d;
  }
  std::vector<Int> ic;
  for (const auto& c : minpoly_) ic.push_back((c * Rat(lcm)).num());
  if (ic.front() == 0) throw FieldError("NumberField: reducible (rational root 0)");

  auto divisors = [](Int n) {
    if (n < 0) n = -n;
    std::vector<Int> ds;
    for (Int i(1); i * i <= n; ++i)
      if (n % i == 0) {
        ds.push_back(i);
        ds.push_back(n / i);
      }
    return ds;
  };
  for (const Int& r : divisors(ic.front()))
    for (const Int& s : divisors(ic.back()))
      for (int sg : {1, -1}) {
        Rat cand(sg * r, s);
        if (evalPoly(minpoly_, cand).isZero())
          throw FieldError("NumberField: reducible (rational root " + cand.str() + ")");
      }
}

void NumberField::buildReductionTable() {
  // theta^deg = -(c_0 + c_1 theta + ... + c_{deg-1} theta^{deg-1});
  // extend to theta^(2 deg - 2) for products.
  int deg = degree();
  std::vector<Rat> cur(deg);
  for (int i = 0; i < deg; ++i) cur[i] = -minpoly_[i];
  reduction_.push_back(cur);
  for (int k = 1; k <= deg - 2; ++k) {
    std::vector<Rat> next(deg, Rat(0));
    // multiply cur by theta, reduce the overflow term via reduction_[0]
    Rat top = cur[deg - 1];
    for (int i = deg - 1; i >= 1; --i) next[i] = cur[i - 1];
    next[0] = Rat(0);
    for (int i = 0; i < deg; ++i) next[i] += top * reduction_[0][i];
    reduction_.push_back(next);
    cur = next;
  }
}

RatInterval NumberField::refine(RatInterval iv, const Rat& eps) const {
  while (iv.width() > eps) {
    // Interval Newton contraction when p'(iv) is bounded away from 0.
    RatInterval dEncl = evalPolyInterval(derivative_, iv);
    if (!dEncl.containsZero()) {
      Rat m = iv.mid();
      Rat pm = evalPoly(minpoly_, m);
      RatInterval newton = RatInterval::point(m) - RatInterval::point(pm) / dEncl;
      Rat l = std::max(newton.lo, iv.lo), h = std::min(newton.hi, iv.hi);
      if (l <= h && (h - l) < iv.width()) {
        iv = RatInterval(l, h);
        continue;
      }
    }
    Rat m = iv.mid();
    int sm = signAt(m);
    if (sm == 0) return RatInterval::point(m);
    // keep the half with the sign change
    if (sm == signAt(iv.lo))
      iv = RatInterval(m, iv.hi);
    else
      iv = RatInterval(iv.lo, m);
  }
  return iv;
}

bool NumberField::sameField(const NumberField& o) const {
  if (this == &o) return true;
  if (minpoly_.size() != o.minpoly_.size()) return false;
  for (size_t i = 0; i < minpoly_.size(); ++i)
    if (minpoly_[i] != o.minpoly_[i]) return false;
  // same polynomial; same root iff the isolating intervals overlap
  return !(isolating_.hi < o.isolating_.lo || o.isolating_.hi < isolating_.lo);
}

NFElem::NFElem(FieldPtr field, std::vector<Rat> coords)
    : field_(std::move(field)), coords_(std::move(coords)) {
  if (!field_) throw FieldError("NFElem: null field in field constructor");
  if (static_cast<int>(coords_.size()) != field_->degree())
    throw FieldError("NFElem: coordinate count does not match field degree");
  demote();
}

NFElem NFElem::generator(const FieldPtr& field) {
  std::vector<Rat> c(field->degree(), Rat(0));
  if (field->degree() == 1) {
    // Q(theta) with theta rational: the generator is the root itself.
    return NFElem(-field->minpoly()[0]);
  }
  c[1] = Rat(1);
  return NFElem(field, std::move(c));
}

const Rat& NFElem::rational() const {
  if (!isRational()) throw FieldError("NFElem: not a rational value");
  return coords_[0];
}

bool NFElem::isZero() const {
  for (const auto& c : coords_)
    if (!c.isZero()) return false;
  return true;
}

void NFElem::demote() {
  if (!field_) return;
  for (size_t i = 1; i < coords_.size(); ++i)
    if (!coords_[i].isZero()) return;
  coords_.resize(1);
  field_ = nullptr;
}

FieldPtr NFElem::mergedField(const NFElem& a, const NFElem& b) {
  if (!a.field_) return b.field_;
  if (!b.field_) return a.field_;
  if (!a.field_->sameField(*b.field_))
    throw FieldError("NFElem: mixing elements of different number fields");
  return a.field_;
}

std::vector<Rat> NFElem::lifted(int deg) const {
  std::vector<Rat> c(deg, Rat(0));
  for (size_t i = 0; i < coords_.size(); ++i) c[i] = coords_[i];
  return c;
}

NFElem NFElem::operator-() const {
  NFElem r = *this;
  for (auto& c : r.coords_) c = -c;
  return r;
}

NFElem operator+(const NFElem& a, const NFElem& b) {
  FieldPtr f = NFElem::mergedField(a, b);
  if (!f) return NFElem(a.coords_[0] + b.coords_[0]);
  int deg = f->degree();
  auto ca = a.lifted(deg), cb = b.lifted(deg);
  for (int i = 0; i < deg; ++i) ca[i] += cb[i];
  return NFElem(f, std::move(ca));
}

NFElem operator-(const NFElem& a, const NFElem& b) { return a + (-b); }

NFElem operator*(const NFElem& a, const NFElem& b) {
  FieldPtr f = NFElem::mergedField(a, b);
  if (!f) return NFElem(a.coords_[0] * b.coords_[0]);
  int deg = f->degree();
  auto ca = a.lifted(deg), cb = b.lifted(deg);
  std::vector<Rat> prod(2 * deg - 1, Rat(0));
  for (int i = 0; i < deg; ++i) {
    if (ca[i].isZero()) continue;
    for (int j = 0; j < deg; ++j) prod[i + j] += ca[i] * cb[j];
  }
  const auto& red = f->reductionTable();
  std::vector<Rat> out(prod.begin(), prod.begin() + deg);
  for (int k = deg; k < 2 * deg - 1; ++k) {
    if (prod[k].isZero()) continue;
    const auto& row = red[k - deg];
    for (int i = 0; i < deg; ++i) out[i] += prod[k] * row[i];
  }
  return NFElem(f, std::move(out));
}

NFElem operator/(const NFElem& a, const NFElem& b) {
  if (b.isZero()) throw FieldError("NFElem: division by zero");
  FieldPtr f = NFElem::mergedField(a, b);
  if (!f) return NFElem(a.coords_[0] / b.coords_[0]);
  // Solve z * b = 1 by Gaussian elimination on the multiplication matrix of b.
  int deg = f->degree();
  // columns of M are b * theta^j expressed in the power basis
  std::vector<std::vector<Rat>> M(deg, std::vector<Rat>(deg, Rat(0)));
  NFElem pw(Rat(1));
  NFElem gen = NFElem::generator(f);
  for (int j = 0; j < deg; ++j) {
    NFElem col = b * pw;
    auto cc = col.lifted(deg);
    for (int i = 0; i < deg; ++i) M[i][j] = cc[i];
    pw = pw * gen;
  }
  // augmented solve M z = e_0
  std::vector<Rat> rhs(deg, Rat(0));
  rhs[0] = Rat(1);
  for (int col = 0, row = 0; col < deg && row < deg; ++col) {
    int piv = -1;
    for (int r = row; r < deg; ++r)
      if (!M[r][col].isZero()) {
        piv = r;
        break;
      }
    if (piv < 0) continue;
    std::swap(M[piv], M[row]);
    std::swap(rhs[piv], rhs[row]);
    Rat inv = Rat(1) / M[row][col];
    for (int c = col; c < deg; ++c) M[row][c] *= inv;
    rhs[row] *= inv;
    for (int r = 0; r < deg; ++r) {
      if (r == row || M[r][col].isZero()) continue;
      Rat factor = M[r][col];
      for (int c = col; c < deg; ++c) M[r][c] -= factor * M[row][c];
      rhs[r] -= factor * rhs[row];
    }
    ++row;
  }
  NFElem inv(f, std::move(rhs));
  return a * inv;
}

bool operator==(const NFElem& a, const NFElem& b) {
  if ((a.field_ == nullptr) != (b.field_ == nullptr)) return false;
  if (a.field_ && !a.field_->sameField(*b.field_))
    throw FieldError("NFElem: comparing elements of different number fields");
  return a.coords_ == b.coords_;
}

bool operator<(const NFElem& a, const NFElem& b) {
  bool ra = a.isRational(), rb = b.isRational();
  if (ra != rb) return ra;  // rationals sort before field elements
  size_t n = std::min(a.coords_.size(), b.coords_.size());
  for (size_t i = 0; i < n; ++i) {
    if (a.coords_[i] < b.coords_[i]) return true;
    if (b.coords_[i] < a.coords_[i]) return false;
  }
  return a.coords_.size() < b.coords_.size();
}

RatInterval NFElem::enclosure(int bits) const {
  if (bits < 1) bits = 1;
  if (isZero()) return RatInterval::point(Rat(0));
  if (isRational()) return RatInterval::point(coords_[0]);
  Rat eps = Rat(1, 2).pow(bits);
  // width(f(theta)) <= |f'| width(theta); shrink theta until f's enclosure fits
  RatInterval th = field_->isolatingInterval();
  Rat target = eps;
  for (int rounds = 0; rounds < 64; ++rounds) {
    th = field_->refine(th, target);
    RatInterval val = evalPolyInterval(coords_, th);
    if (val.width() <= eps) return val;
    target = target / Rat(16);
  }
  throw FieldError("NFElem: enclosure refinement did not converge");
}

int NFElem::signReal() const {
  if (isZero()) return 0;
  if (isRational()) return coords_[0].sign();
  for (int bits = 8;; bits *= 2) {
    RatInterval e = enclosure(bits);
    if (e.lo.sign() > 0) return 1;
    if (e.hi.sign() < 0) return -1;
    if (bits > (1 << 20)) throw FieldError("NFElem: sign refinement exceeded precision cap");
  }
}

double NFElem::toDouble() const {
  if (isRational()) return coords_[0].toDouble();
  RatInterval e = enclosure(64);
  return e.mid().toDouble();
}

std::string NFElem::str() const {
  if (isRational()) return coords_[0].str();
  std::ostringstream os;
  const std::string& sym = field_->symbol();
  bool first = true;
  for (size_t i = 0; i < coords_.size(); ++i) {
    if (coords_[i].isZero()) continue;
    if (!first) os << " + ";
    first = false;
    if (i == 0) {
      os << coords_[i].str();
    } else {
      os << coords_[i].str() << "*" << sym;
      if (i > 1) os << "^" << i;
    }
  }
  if (first) os << "0";
  return os.str();
}

}  // namespace hnflow
