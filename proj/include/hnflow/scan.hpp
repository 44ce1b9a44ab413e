#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "hnflow/hn.hpp"
#include "hnflow/interval.hpp"
#include "hnflow/simulate.hpp"

namespace hnflow {

template <class K>
struct ScanConfig {
  Matrix<K> l;      // exact, invertible
  Rat epsilon;      // > 0
  long height = 1;  // N >= 1, sup-norm shells
  bool includeZeroProducts = true;

  void validate() const {
    if (l.rows() != l.cols()) throw std::invalid_argument("ScanConfig: square matrix required");
    if (!(Rat(0) < epsilon)) throw std::invalid_argument("ScanConfig: epsilon > 0 required");
    if (height < 1) throw std::invalid_argument("ScanConfig: height >= 1 required");
    if (FieldTraits<K>::isZero(determinant<K>(l)))
      throw std::invalid_argument("ScanConfig: singular matrix");
  }
};

/// A primitive integer solution of prod_i |L_i(x)| <= ||x||^-eps, canonical
/// sign (first nonzero positive). Zero products are flagged exactly.
struct Solution {
  VecZ x;
  double norm = 0.0;               // Euclidean
  bool zeroProduct = false;        // some L_i(x) = 0 exactly
  double productLogLo = 0.0;       // certified interval of log prod |L_i(x)|
  double productLogHi = 0.0;       // (meaningless when zeroProduct)
  std::optional<int> assignedSubspace;
  std::optional<long> flowT;       // t from the rounding construction
  std::vector<long> flowWeights;   // n_i, empty when no flow was built
};

/// Flow-construction output: t >= 1 and an integer weight vector with zero
/// sum, together with the certified contraction check ||a_t L x|| <= d e^-t
/// (Euclidean, plus the sup-norm variant for diagnostics).
struct SolutionFlow {
  long t = 0;
  std::vector<long> n;
  bool contractionVerified = false;     // Euclidean norm
  bool contractionVerifiedSup = false;  // sup norm
};

namespace detail {

/// Decides log(prod |L_i(x)|) <= -eps log ||x|| with interval refinement.
/// For K = Rat the comparison is fully exact (integer powers).
template <class K>
bool satisfiesInequality(const std::vector<K>& values, const Int& normSq, const Rat& eps,
                         bool& anyZero) {
  anyZero = false;
  for (const auto& v : values)
    if (FieldTraits<K>::isZero(v)) {
      anyZero = true;
      return true;  // zero product, inequality non-strict
    }
  if constexpr (std::is_same_v<K, Rat>) {
    // prod^2 <= (normSq)^-eps  <=>  (prod^2)^q * normSq^p <= 1 with eps = p/q
    Rat prod(1);
    for (const auto& v : values) prod *= v;
    Rat lhs = (prod * prod).pow(eps.den().get_si());
    Rat rhs = Rat(normSq).pow(eps.num().get_si());
    return lhs * rhs <= Rat(1);
  } else {
    for (mpfr_prec_t prec = 96; prec <= 16384; prec *= 2) {
      RInterval sumLog(prec);
      bool undecided = false;
      for (const auto& v : values) {
        RatInterval enc = FieldTraits<K>::enclosure(v, static_cast<int>(prec));
        RInterval iv = RInterval::fromRatInterval(enc, prec).abs();
        if (iv.signLo() <= 0) {
          undecided = true;  // enclosure touches zero, refine
          break;
        }
        sumLog += iv.log();
      }
      if (undecided) continue;
      RInterval rhs = -(RInterval::logOfRat(Rat(normSq), prec) *
                        RInterval::fromRat(eps / Rat(2), prec));
      if (RInterval::certainlyLeq(sumLog, rhs)) return true;
      if (RInterval::certainlyLess(rhs, sumLog)) return false;
    }
    throw PrecisionError("scan: inequality comparison did not resolve (exact tie?)");
  }
}

}  // namespace detail

inline bool lexLessZ(const VecZ& a, const VecZ& b) {
  for (int i = 0; i < a.size(); ++i) {
    if (a(i) < b(i)) return true;
    if (b(i) < a(i)) return false;
  }
  return false;
}

/// All primitive x, 1 <= ||x||_sup <= N up to sign, satisfying the product
/// inequality; enumerated by sup-norm shells, inequality in Euclidean norm.
/// A two-stage double filter rejects the bulk (true solutions have product
/// <= 1, so prod > 1 + errorBound is a certain reject); survivors are
/// certified exactly (rational case) or by adaptive interval arithmetic.
template <class K>
std::vector<Solution> scanSolutions(const ScanConfig<K>& cfg) {
  cfg.validate();
  const int d = static_cast<int>(cfg.l.rows());
  const long n = cfg.height;

  std::vector<double> rowsD(static_cast<size_t>(d) * d);
  double maxAbsEntry = 0.0;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      RatInterval enc = FieldTraits<K>::enclosure(cfg.l(i, j), 60);
      rowsD[static_cast<size_t>(i) * d + j] = enc.mid().toDouble();
      maxAbsEntry = std::max(maxAbsEntry, std::abs(rowsD[static_cast<size_t>(i) * d + j]));
    }
  const double eps = cfg.epsilon.toDouble();
  // rigorous error bounds uniform over the box
  const double maxRowVal = d * maxAbsEntry * static_cast<double>(n) + 1.0;
  const double rowErr = 4.0 * d * maxAbsEntry * static_cast<double>(n) * 1e-15;
  const double prodErr = d * rowErr * std::pow(maxRowVal, d - 1);

  std::vector<Solution> out;
  std::vector<long> x(static_cast<size_t>(d), 0);

  auto leaf = [&]() {
    double prod = 1.0;
    for (int i = 0; i < d; ++i) {
      double f = 0.0;
      const double* row = rowsD.data() + static_cast<size_t>(i) * d;
      for (int j = 0; j < d; ++j) f += row[j] * static_cast<double>(x[static_cast<size_t>(j)]);
      prod *= std::abs(f);
    }
    if (prod > 1.0 + prodErr) return;  // ||x|| >= 1 makes the bound <= 1

    long g = 0;
    for (int i = 0; i < d; ++i) {
      long a = std::labs(x[static_cast<size_t>(i)]);
      while (a) {
        long t = g % a;
        g = a;
        a = t;
      }
    }
    if (g != 1) return;

    double norm2 = 0.0;
    for (int i = 0; i < d; ++i)
      norm2 += static_cast<double>(x[static_cast<size_t>(i)]) * static_cast<double>(x[static_cast<size_t>(i)]);
    double bound = std::pow(norm2, -eps / 2.0);
    if (prod - prodErr > bound) return;  // certain reject

    // exact certification
    std::vector<K> values;
    Int normSq(0);
    for (int i = 0; i < d; ++i) normSq += Int(x[static_cast<size_t>(i)]) * Int(x[static_cast<size_t>(i)]);
    for (int i = 0; i < d; ++i) {
      K acc = FieldTraits<K>::zero();
      for (int j = 0; j < d; ++j) acc = acc + cfg.l(i, j) * K(Rat(x[static_cast<size_t>(j)]));
      values.push_back(acc);
    }
    bool anyZero = false;
    if (!detail::satisfiesInequality<K>(values, normSq, cfg.epsilon, anyZero)) return;
    if (anyZero && !cfg.includeZeroProducts) return;

    Solution sol;
    sol.x = VecZ(d);
    for (int i = 0; i < d; ++i) sol.x(i) = Int(x[static_cast<size_t>(i)]);
    sol.norm = std::sqrt(Rat(normSq).toDouble());
    sol.zeroProduct = anyZero;
    if (!anyZero) {
      RInterval sumLog(128);
      for (const auto& v : values) {
        RatInterval enc = FieldTraits<K>::enclosure(v, 160);
        sumLog += RInterval::fromRatInterval(enc, 128).abs().log();
      }
      sol.productLogLo = sumLog.loDouble();
      sol.productLogHi = sumLog.hiDouble();
    }
    out.push_back(std::move(sol));
  };

  std::function<void(int, bool)> rec = [&](int pos, bool leadingZero) {
    if (pos == d) {
      if (!leadingZero) leaf();
      return;
    }
    long lo = leadingZero ? 0 : -n;
    for (long v = lo; v <= n; ++v) {
      x[static_cast<size_t>(pos)] = v;
      rec(pos + 1, leadingZero && v == 0);
    }
  };
  rec(0, true);

  std::sort(out.begin(), out.end(), [](const Solution& a, const Solution& b) {
    if (a.norm != b.norm) return a.norm < b.norm;
    return lexLessZ(a.x, b.x);
  });
  return out;
}

/// Operator-norm bound ||L x|| <= C ||x|| via the Frobenius estimate,
/// rounded up to an integer, at least 1.
template <class K>
long operatorNormBound(const Matrix<K>& l) {
  double fro2 = 0.0;
  for (int i = 0; i < l.rows(); ++i)
    for (int j = 0; j < l.cols(); ++j) {
      RatInterval enc = FieldTraits<K>::enclosure(l(i, j), 48);
      double hi = std::max(std::abs(enc.lo.toDouble()), std::abs(enc.hi.toDouble()));
      fro2 += hi * hi;
    }
  double c = std::sqrt(fro2) * (1.0 + 1e-9);
  return std::max(1L, static_cast<long>(std::ceil(c)));
}

/// The rounding construction: t = floor((eps/4d) log ||x||), clamp the form
/// logs at -Dt with D = 5d(log C + 8d/eps), recenter to zero sum, round to
/// integers n_i with sum 0 and |b_i/t - n_i| <= 3/2, and certify
/// ||a_t L x|| <= d e^{-t}. Requires t >= 1 and all L_i(x) nonzero.
template <class K>
SolutionFlow solutionToFlow(const VecZ& x, const Matrix<K>& l, const Rat& eps, long cBound) {
  const int d = static_cast<int>(l.rows());
  std::vector<K> values;
  for (int i = 0; i < d; ++i) {
    K acc = FieldTraits<K>::zero();
    for (int j = 0; j < d; ++j) acc = acc + l(i, j) * K(Rat(x(j)));
    if (FieldTraits<K>::isZero(acc))
      throw std::invalid_argument("solutionToFlow: a form vanishes on x (kernel solution)");
    values.push_back(acc);
  }
  Int normSq(0);
  for (int i = 0; i < d; ++i) normSq += x(i) * x(i);

  const mpfr_prec_t prec = 192;
  // t = floor((eps/4d) * (1/2) log normSq)
  RInterval tIv = RInterval::logOfRat(Rat(normSq), prec) *
                  RInterval::fromRat(eps / Rat(8 * d), prec);
  long t = static_cast<long>(std::floor(tIv.midDouble()));
  // the floor is decisive unless the interval straddles an integer; widths
  // here are ~2^-180, a tie would mean (eps/8d) log||x||^2 is an integer
  if (std::floor(tIv.loDouble()) != std::floor(tIv.hiDouble()))
    throw PrecisionError("solutionToFlow: t-floor undecided");
  if (t < 1) throw std::invalid_argument("solutionToFlow: solution too small (t < 1)");

  double logC = std::log(static_cast<double>(cBound));
  double dD = 5.0 * d * (logC + 8.0 * d / eps.toDouble());
  std::vector<double> lPrime(static_cast<size_t>(d));
  for (int i = 0; i < d; ++i) {
    RatInterval enc = FieldTraits<K>::enclosure(values[static_cast<size_t>(i)], static_cast<int>(prec));
    double li = RInterval::fromRatInterval(enc, prec).abs().log().midDouble();
    lPrime[static_cast<size_t>(i)] = std::max(li, -dD * static_cast<double>(t));
  }
  double mean = 0.0;
  for (double v : lPrime) mean += v;
  mean /= d;
  std::vector<double> bOverT(static_cast<size_t>(d));
  for (int i = 0; i < d; ++i) bOverT[static_cast<size_t>(i)] = (mean - lPrime[static_cast<size_t>(i)]) / static_cast<double>(t);

  std::vector<long> nVec(static_cast<size_t>(d));
  long sum = 0;
  for (int i = 0; i < d; ++i) {
    nVec[static_cast<size_t>(i)] = std::lround(bOverT[static_cast<size_t>(i)]);
    sum += nVec[static_cast<size_t>(i)];
  }
  // adjust toward zero sum, spending the largest remaining rounding slack
  while (sum != 0) {
    int dir = sum > 0 ? -1 : +1;  // decrement if sum too big
    int bestIdx = -1;
    double bestSlack = -1e300;
    for (int i = 0; i < d; ++i) {
      double newDiff = bOverT[static_cast<size_t>(i)] - (nVec[static_cast<size_t>(i)] + dir);
      if (std::abs(newDiff) > 1.5 + 1e-9) continue;
      double slack = 1.5 - std::abs(newDiff);
      if (slack > bestSlack) {
        bestSlack = slack;
        bestIdx = i;
      }
    }
    if (bestIdx < 0) throw std::logic_error("solutionToFlow: zero-sum adjustment failed");
    nVec[static_cast<size_t>(bestIdx)] += dir;
    sum += dir;
  }

  // certify ||a_t L x|| <= d e^{-t}
  RInterval norm2(prec);
  RInterval supNorm(prec);
  for (int i = 0; i < d; ++i) {
    RatInterval enc = FieldTraits<K>::enclosure(values[static_cast<size_t>(i)], static_cast<int>(prec));
    RInterval coord = RInterval::fromRatInterval(enc, prec) *
                      RInterval::expOfRat(Rat(nVec[static_cast<size_t>(i)] * t), prec);
    norm2 += coord.square();
    RInterval mag = coord.abs();
    if (mpfr_cmp(mag.hi(), supNorm.hi()) > 0) supNorm = mag;
  }
  RInterval rhs = RInterval::expOfRat(Rat(-t), prec) * RInterval::fromLong(d, prec);
  SolutionFlow flow;
  flow.t = t;
  flow.n = nVec;
  flow.contractionVerified = RInterval::certainlyLeq(norm2.sqrt(), rhs);
  flow.contractionVerifiedSup = RInterval::certainlyLeq(supNorm, rhs);
  return flow;
}

/// Assigns each solution to the first containing subspace; the rest are
/// outliers. Returns (assignment written in-place, outlier indices).
template <class K>
std::vector<size_t> classifySolutions(std::vector<Solution>& solutions,
                                      const std::vector<Subspace<K>>& subspaces) {
  std::vector<size_t> outliers;
  for (size_t s = 0; s < solutions.size(); ++s) {
    auto& sol = solutions[s];
    sol.assignedSubspace.reset();
    const int d = static_cast<int>(sol.x.size());
    Vector<K> xv(d);
    for (int i = 0; i < d; ++i) xv(i) = K(Rat(sol.x(i)));
    for (size_t k = 0; k < subspaces.size(); ++k) {
      if (subspaces[k].dim() >= subspaces[k].ambientDim()) continue;  // proper only
      if (subspaces[k].contains(xv)) {
        sol.assignedSubspace = static_cast<int>(k);
        break;
      }
    }
    if (!sol.assignedSubspace) outliers.push_back(s);
  }
  return outliers;
}

/// Rational kernels of the individual forms (rows of L), as subspaces of
/// Q^d; zero-product solutions live exactly here.
template <class K>
std::vector<Subspace<K>> rationalFormKernels(const Matrix<K>& l) {
  const int d = static_cast<int>(l.rows());
  std::vector<Subspace<K>> out;
  for (int i = 0; i < d; ++i) {
    Matrix<K> row(1, d);
    for (int j = 0; j < d; ++j) row(0, j) = l(i, j);
    Matrix<K> ker = kernelBasis<K>(row);
    if (ker.rows() == 0) continue;
    // keep only the rational part: over a number field, intersect with Q^d
    // by solving for rational kernel vectors exactly
    if constexpr (std::is_same_v<K, Rat>) {
      out.push_back(Subspace<K>::fromRows(ker));
    } else {
      // x rational with sum_j l_ij x_j = 0: split the equation over the
      // power basis into rational constraints
      int deg = 1;
      for (int j = 0; j < d; ++j)
        if (!l(i, j).isRational()) deg = l(i, j).field()->degree();
      MatQ constraints(deg, d);
      for (int j = 0; j < d; ++j) {
        std::vector<Rat> c(static_cast<size_t>(deg), Rat(0));
        if (l(i, j).isRational()) {
          c[0] = l(i, j).rational();
        } else {
          for (size_t k = 0; k < l(i, j).coords().size(); ++k) c[k] = l(i, j).coords()[k];
        }
        for (int k = 0; k < deg; ++k) constraints(k, j) = c[static_cast<size_t>(k)];
      }
      MatQ kerQ = kernelBasis<Rat>(constraints);
      if (kerQ.rows() == 0) continue;
      Matrix<K> kerK(kerQ.rows(), d);
      for (int r = 0; r < kerQ.rows(); ++r)
        for (int j = 0; j < d; ++j) kerK(r, j) = K(kerQ(r, j));
      out.push_back(Subspace<K>::fromRows(kerK));
    }
  }
  return out;
}

/// Next-to-top Harder-Narasimhan terms V(a) = V_{h-1} over a flow catalog,
/// deduplicated; trivial filtrations contribute nothing.
template <class K>
std::vector<Subspace<K>> exceptionalSubspaces(const MatrixFamily<K>& fam, const Rat& /*eps*/,
                                              const std::vector<Flow>& flowCatalog,
                                              const std::vector<Subspace<K>>& extraGenerators = {}) {
  std::set<Subspace<K>> acc;
  for (const auto& a : flowCatalog) {
    if (!a.isUnimodular()) throw std::invalid_argument("exceptionalSubspaces: flows must be unimodular");
    auto lat = closeLattice(familyFlagGenerators(fam, a, extraGenerators), fam.dim);
    auto f = hnFiltration(tauOracle(fam, a), lat);
    if (f.steps() >= 2) acc.insert(f.chain[f.chain.size() - 2]);
  }
  return std::vector<Subspace<K>>(acc.begin(), acc.end());
}

/// Multiplicative approximation hits: all (p, q), 0 < ||q||_inf <= N, with
/// |p + q.y| Pi_+(q) <= Pi_+(q)^{-eps}, p the nearest integer to -q.y.
struct VwmaHit {
  Int p;
  VecZ q;
  double lhsLog = 0.0;  // log(|p + q.y| Pi_+(q)); -inf when exactZero
  bool exactZero = false;
};

template <class K>
std::vector<VwmaHit> vwmaTest(const std::vector<K>& y, const Rat& eps, long height) {
  const int n = static_cast<int>(y.size());
  std::vector<VwmaHit> hits;
  std::vector<long> q(static_cast<size_t>(n), 0);
  std::function<void(int, bool)> rec = [&](int pos, bool allZero) {
    if (pos == n) {
      if (allZero) return;
      // p = nearest integer to -q.y is the only candidate
      K dot = FieldTraits<K>::zero();
      for (int i = 0; i < n; ++i) dot = dot + y[static_cast<size_t>(i)] * K(Rat(q[static_cast<size_t>(i)]));
      RatInterval enc = FieldTraits<K>::enclosure(dot, 120);
      Rat mid = enc.mid();
      Int p = (-mid).roundNearest();
      K resid = K(Rat(p)) + dot;
      Rat piPlus(1);
      for (int i = 0; i < n; ++i) {
        long a = std::labs(q[static_cast<size_t>(i)]);
        if (a > 1) piPlus *= Rat(a);
      }
      bool accept = false, exactZero = false;
      if (FieldTraits<K>::isZero(resid)) {
        accept = true;
        exactZero = true;
      } else {
        // |resid| * piPlus <= piPlus^{-eps}
        for (mpfr_prec_t prec = 96; prec <= 8192 && !accept; prec *= 2) {
          RatInterval re = FieldTraits<K>::enclosure(resid, static_cast<int>(prec));
          RInterval lhs = RInterval::fromRatInterval(re, prec).abs() *
                          RInterval::fromRat(piPlus, prec);
          RInterval rhs(prec);
          {
            // piPlus^{-eps} = exp(-eps log piPlus)
            RInterval lp = RInterval::logOfRat(piPlus, prec) * RInterval::fromRat(-eps, prec);
            rhs = lp.exp();
          }
          if (RInterval::certainlyLeq(lhs, rhs)) {
            accept = true;
            break;
          }
          if (RInterval::certainlyLess(rhs, lhs)) break;
          if (prec >= 8192) throw PrecisionError("vwmaTest: comparison did not resolve");
        }
      }
      if (accept) {
        VwmaHit h;
        h.p = p;
        h.q = VecZ(n);
        for (int i = 0; i < n; ++i) h.q(i) = Int(q[static_cast<size_t>(i)]);
        h.exactZero = exactZero;
        if (!exactZero) {
          RatInterval re = FieldTraits<K>::enclosure(resid, 160);
          h.lhsLog = (RInterval::fromRatInterval(re, 128).abs() *
                      RInterval::fromRat(piPlus, 128)).log().midDouble();
        } else {
          h.lhsLog = -std::numeric_limits<double>::infinity();
        }
        hits.push_back(std::move(h));
      }
      return;
    }
    for (long v = -height; v <= height; ++v) {
      q[static_cast<size_t>(pos)] = v;
      rec(pos + 1, allZero && v == 0);
    }
  };
  rec(0, true);
  return hits;
}

}  // namespace hnflow
