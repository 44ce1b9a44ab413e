#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "hnflow/interval.hpp"
#include "hnflow/polygon.hpp"
#include "hnflow/subspace.hpp"

namespace hnflow {

/// Family of (possibly non-square) m x d sample maps over one field context.
template <class K>
struct HomFamily {
  std::vector<Matrix<K>> samples;
  std::string label;

  HomFamily() = default;
  explicit HomFamily(std::vector<Matrix<K>> s, std::string lbl = "")
      : samples(std::move(s)), label(std::move(lbl)) {
    if (samples.empty()) throw std::invalid_argument("HomFamily: nonempty samples required");
    for (const auto& m : samples)
      if (m.rows() != samples.front().rows() || m.cols() != samples.front().cols())
        throw std::invalid_argument("HomFamily: inconsistent shapes");
  }

  int rows() const { return static_cast<int>(samples.front().rows()); }
  int cols() const { return static_cast<int>(samples.front().cols()); }
};

/// Exact value with infinity, for exponent formulas.
struct ExtRat {
  bool infinite = false;
  Rat value;

  static ExtRat infinity() { return {true, Rat(0)}; }
  static ExtRat of(Rat v) { return {false, std::move(v)}; }

  friend bool operator<(const ExtRat& a, const ExtRat& b) {
    if (a.infinite) return false;
    if (b.infinite) return true;
    return a.value < b.value;
  }
  friend bool operator==(const ExtRat& a, const ExtRat& b) {
    if (a.infinite || b.infinite) return a.infinite == b.infinite;
    return a.value == b.value;
  }
  std::string str() const { return infinite ? "inf" : value.str(); }
};

/// r(W) = max over samples of dim x(W), exact.
template <class K>
int rankImage(const HomFamily<K>& fam, const Subspace<K>& w) {
  if (w.ambientDim() != fam.cols()) throw std::invalid_argument("rankImage: shape mismatch");
  if (w.dim() == 0) return 0;
  int best = 0;
  for (const auto& x : fam.samples) {
    Matrix<K> img = w.basis() * x.transpose();  // rows span x(W)
    best = std::max(best, rank(img));
  }
  return best;
}

template <class K>
struct BetaCertificate {
  ExtRat beta;
  Subspace<K> maximizer;
  int r = 0;
};

/// max over candidates W of dim W / r(W) - 1; infinity when some nonzero W
/// has r(W) = 0 (a rational kernel).
template <class K>
BetaCertificate<K> betaFormula(const HomFamily<K>& fam, const std::vector<Subspace<K>>& candidates) {
  bool haveFull = false;
  for (const auto& w : candidates)
    if (w.isFullSpace()) haveFull = true;
  if (!haveFull) throw std::invalid_argument("betaFormula: candidates must include the full space");
  BetaCertificate<K> best;
  bool first = true;
  for (const auto& w : candidates) {
    if (w.dim() == 0) continue;
    int r = rankImage(fam, w);
    ExtRat val = r == 0 ? ExtRat::infinity() : ExtRat::of(Rat(w.dim()) / Rat(r) - Rat(1));
    if (first || best.beta < val) {
      best.beta = val;
      best.maximizer = w;
      best.r = r;
      first = false;
    }
  }
  return best;
}

/// Rows of the multiplicative system L_Y: L_i(p,q) = Y_i q - p_i for
/// i <= m, L_{m+j}(p,q) = q_j. Returned as an (m+n) x (m+n) matrix of rows.
template <class K>
Matrix<K> multiplicativeForms(const Matrix<K>& y) {
  const int m = static_cast<int>(y.rows());
  const int n = static_cast<int>(y.cols());
  Matrix<K> forms(m + n, m + n);
  forms.setConstant(FieldTraits<K>::zero());
  for (int i = 0; i < m; ++i) {
    forms(i, i) = K(Rat(-1));
    for (int j = 0; j < n; ++j) forms(i, m + j) = y(i, j);
  }
  for (int j = 0; j < n; ++j) forms(m + j, m + j) = FieldTraits<K>::one();
  return forms;
}

/// s_{I,W} = rank of the restrictions (L_i|_W)_{i in I}, exact.
template <class K>
int sRank(const Matrix<K>& y, const std::vector<int>& idx, const Subspace<K>& w) {
  if (w.dim() == 0) return 0;
  Matrix<K> forms = multiplicativeForms(y);
  Matrix<K> restricted(static_cast<int>(idx.size()), w.dim());
  for (size_t r = 0; r < idx.size(); ++r) {
    for (int c = 0; c < w.dim(); ++c) {
      K acc = FieldTraits<K>::zero();
      for (int j = 0; j < w.ambientDim(); ++j) acc = acc + forms(idx[r], j) * w.basis()(c, j);
      restricted(static_cast<int>(r), c) = acc;
    }
  }
  return rank(restricted);
}

template <class K>
struct OmegaCertificate {
  ExtRat omega;
  Subspace<K> w;
  std::vector<int> setI, setJ;
  int r = 0, s = 0;
};

/// max over candidate W and all (I, J), {} != I <= {1..m} <= J < {1..m+n},
/// of (dim W - s)|I| / (r (m+n-|J|)) with r = max_samples s_{I,W},
/// s = max_samples s_{J,W}; r = 0 with dim W > s gives infinity.
template <class K>
OmegaCertificate<K> omegaFormula(const std::vector<Matrix<K>>& ySamples,
                                 const std::vector<Subspace<K>>& candidates) {
  if (ySamples.empty()) throw std::invalid_argument("omegaFormula: need samples");
  const int m = static_cast<int>(ySamples.front().rows());
  const int n = static_cast<int>(ySamples.front().cols());
  bool haveFull = false;
  for (const auto& w : candidates)
    if (w.isFullSpace()) haveFull = true;
  if (!haveFull) throw std::invalid_argument("omegaFormula: candidates must include the full space");

  // subsets I of {0..m-1} nonempty; J = {0..m-1} plus a proper subset of the tail
  std::vector<std::vector<int>> iSets;
  for (int k = 1; k <= m; ++k)
    for (auto& s : indexSubsets(m, k)) iSets.push_back(s);
  std::vector<std::vector<int>> jSets;
  for (int k = 0; k < n; ++k)  // |J| = m + k < m + n
    for (auto& tail : indexSubsets(n, k)) {
      std::vector<int> j(m);
      for (int i = 0; i < m; ++i) j[static_cast<size_t>(i)] = i;
      for (int t : tail) j.push_back(m + t);
      jSets.push_back(std::move(j));
    }

  OmegaCertificate<K> best;
  bool first = true;
  auto consider = [&](const ExtRat& val, const Subspace<K>& w, const std::vector<int>& iSet,
                      const std::vector<int>& jSet, int r, int s) {
    if (first || best.omega < val) {
      best = {val, w, iSet, jSet, r, s};
      first = false;
    }
  };

  for (const auto& w : candidates) {
    if (w.dim() == 0) continue;
    for (const auto& iSet : iSets) {
      int r = 0;
      for (const auto& y : ySamples) r = std::max(r, sRank(y, iSet, w));
      for (const auto& jSet : jSets) {
        int s = 0;
        for (const auto& y : ySamples) s = std::max(s, sRank(y, jSet, w));
        int num = (w.dim() - s) * static_cast<int>(iSet.size());
        int den = m + n - static_cast<int>(jSet.size());
        if (r == 0) {
          if (w.dim() > s) consider(ExtRat::infinity(), w, iSet, jSet, r, s);
          continue;
        }
        if (num <= 0) continue;  // nonpositive ratios never beat the base case
        consider(ExtRat::of(Rat(num) / Rat(r * den)), w, iSet, jSet, r, s);
      }
    }
  }
  if (!best.omega.infinite && best.omega.value < Rat(1))
    throw std::logic_error("omegaFormula: base case missing (result < 1)");
  return best;
}

/// The g*f vertices p_{a,b} of the exponent polytope:
/// d_1=..=d_a=0 < d_{a+1}=..=d_g=1 and c_1=..=c_b=(g-a)/b > c_{b+1}=..=c_f=0.
struct PolytopeVertex {
  std::vector<Rat> c, d;
};

inline std::vector<PolytopeVertex> polytopeVertices(int f, int g) {
  if (f < 1 || g < 1) throw std::invalid_argument("polytopeVertices: f, g >= 1");
  std::vector<PolytopeVertex> out;
  for (int a = 0; a <= g - 1; ++a)
    for (int b = 1; b <= f; ++b) {
      PolytopeVertex v;
      v.c.assign(static_cast<size_t>(f), Rat(0));
      v.d.assign(static_cast<size_t>(g), Rat(0));
      for (int i = 0; i < b; ++i) v.c[static_cast<size_t>(i)] = Rat(g - a, b);
      for (int i = a; i < g; ++i) v.d[static_cast<size_t>(i)] = Rat(1);
      // defining inequalities of (P), checked exactly
      for (int i = 1; i < f; ++i)
        if (v.c[static_cast<size_t>(i - 1)] < v.c[static_cast<size_t>(i)])
          throw std::logic_error("polytopeVertices: c not nonincreasing");
      for (int i = 1; i < g; ++i)
        if (v.d[static_cast<size_t>(i)] < v.d[static_cast<size_t>(i - 1)])
          throw std::logic_error("polytopeVertices: d not nondecreasing");
      Rat sc(0), sd(0);
      for (const auto& q : v.c) sc += q;
      for (const auto& q : v.d) sd += q;
      if (sd < sc) throw std::logic_error("polytopeVertices: sum(d) >= sum(c) violated");
      out.push_back(std::move(v));
    }
  return out;
}

template <class K>
struct DirichletWitness {
  VecZ v;                      // integer vector in W
  bool kernelBranch = false;   // r = 0: exact kernel vector
  double lhsLog = 0.0;         // log prod_{i<=m} |L_i(v)| (when finite)
  bool lhsZero = false;
  double rhsLog = 0.0;         // log of C * prod_j |L_{m+j}(v)|^{-ratio}
  Rat ratio;                   // (k-s)|I| / (r(m+n-|J|))
  double boxConstant = 1.0;    // the c0 that admitted the witness
};

/// Minkowski-box witness for the Dirichlet lower bound: a nonzero integer
/// v in W with |L_{i_l}(v)| <= Q^{-(k-s)} (l <= r), <= c0 (r < l <= s),
/// <= Q^r (l > s), indices picked by the greedy independence selection.
/// c0 grows geometrically until the box contains a lattice point of W.
template <class K>
DirichletWitness<K> dirichletWitness(const Matrix<K>& y, const Subspace<K>& w,
                                     const std::vector<int>& iSet, const std::vector<int>& jSet,
                                     const Rat& q, long enumCap = 1000000) {
  const int m = static_cast<int>(y.rows());
  const int n = static_cast<int>(y.cols());
  const int k = w.dim();
  if (k == 0) throw std::invalid_argument("dirichletWitness: zero subspace");
  Matrix<K> forms = multiplicativeForms(y);

  int r = sRank(y, iSet, w);
  int s = sRank(y, jSet, w);
  MatZ wz = w.integralBasis();  // rows: Z-basis of W cap Z^{m+n}

  DirichletWitness<K> out;
  out.ratio = r == 0 ? Rat(0) : Rat((k - s) * static_cast<int>(iSet.size())) /
                                    Rat(r * (m + n - static_cast<int>(jSet.size())));

  auto formAt = [&](int formIdx, const VecZ& vec) {
    K acc = FieldTraits<K>::zero();
    for (int j = 0; j < m + n; ++j) acc = acc + forms(formIdx, j) * K(Rat(vec(j)));
    return acc;
  };

  if (r == 0) {
    // all I-forms vanish on W: any primitive lattice vector is a witness
    out.kernelBranch = true;
    out.v = primitiveRow<Rat>([&] {
      VecQ row(m + n);
      for (int j = 0; j < m + n; ++j) row(j) = Rat(wz(0, j));
      return row;
    }());
    out.lhsZero = true;
    return out;
  }
  if (s >= k) throw std::invalid_argument("dirichletWitness: s >= dim W, nothing to prove");

  // greedy independence selection i_1..i_k: first r from I, extend to s via J,
  // complete to k over all indices
  std::vector<int> selected;
  auto extendFrom = [&](const std::vector<int>& pool, int target) {
    for (int idx : pool) {
      if (static_cast<int>(selected.size()) >= target) break;
      std::vector<int> trial = selected;
      trial.push_back(idx);
      if (sRank(y, trial, w) == static_cast<int>(trial.size())) selected.push_back(idx);
    }
  };
  extendFrom(iSet, r);
  extendFrom(jSet, s);
  {
    std::vector<int> all(static_cast<size_t>(m + n));
    for (int i = 0; i < m + n; ++i) all[static_cast<size_t>(i)] = i;
    extendFrom(all, k);
  }
  if (static_cast<int>(selected.size()) != k)
    throw std::logic_error("dirichletWitness: independence selection failed");

  // box bounds per selected form
  const mpfr_prec_t prec = 128;
  auto boxBound = [&](int l, double c0) {
    double qd = q.toDouble();
    if (l < r) return std::pow(qd, -static_cast<double>(k - s));
    if (l < s) return c0;
    return std::pow(qd, static_cast<double>(r));
  };

  // enumerate integer points of W by coefficient box; the coefficient bound
  // comes from inverting the selected forms on W (exact)
  const int rank = static_cast<int>(wz.rows());
  Matrix<K> sel(k, m + n);
  for (int l = 0; l < k; ++l)
    for (int j = 0; j < m + n; ++j) sel(l, j) = forms(selected[static_cast<size_t>(l)], j);
  // matrix of selected forms applied to the Z-basis vectors: k x rank
  Matrix<K> fw(k, rank);
  for (int l = 0; l < k; ++l)
    for (int b = 0; b < rank; ++b) {
      K acc = FieldTraits<K>::zero();
      for (int j = 0; j < m + n; ++j) acc = acc + sel(l, j) * K(Rat(wz(b, j)));
      fw(l, b) = acc;
    }
  Matrix<K> fwInv = inverse<K>(fw);  // coefficients = fwInv * form-values

  for (double c0 = 1.0; c0 <= 1e9; c0 *= 2.0) {
    // coefficient bounds: |coef_b| <= sum_l |fwInv(b,l)| * bound_l
    std::vector<long> coefBound(static_cast<size_t>(rank), 0);
    double totalPoints = 1.0;
    for (int b = 0; b < rank; ++b) {
      double acc = 0.0;
      for (int l = 0; l < k; ++l) {
        RatInterval e = FieldTraits<K>::enclosure(fwInv(b, l), 64);
        double mag = std::max(std::abs(e.lo.toDouble()), std::abs(e.hi.toDouble()));
        acc += mag * boxBound(l, c0);
      }
      coefBound[static_cast<size_t>(b)] = static_cast<long>(std::floor(acc + 1e-9));
      totalPoints *= 2.0 * coefBound[static_cast<size_t>(b)] + 1.0;
    }
    if (totalPoints > static_cast<double>(enumCap))
      throw PrecisionError("dirichletWitness: box exceeds the enumeration cap");
    // enumerate coefficients
    std::vector<long> coef(static_cast<size_t>(rank), 0);
    VecZ bestV;
    bool found = false;
    std::function<void(int)> recurse = [&](int pos) {
      if (found) return;
      if (pos == rank) {
        bool allZero = true;
        for (long cc : coef)
          if (cc != 0) allZero = false;
        if (allZero) return;
        VecZ vec(m + n);
        for (int j = 0; j < m + n; ++j) {
          Int acc(0);
          for (int b = 0; b < rank; ++b) acc += Int(coef[static_cast<size_t>(b)]) * wz(b, j);
          vec(j) = acc;
        }
        // exact box membership: |L_{i_l}(v)| <= bound_l, decided by intervals
        for (int l = 0; l < k; ++l) {
          K val = formAt(selected[static_cast<size_t>(l)], vec);
          if (FieldTraits<K>::isZero(val)) continue;
          RatInterval e = FieldTraits<K>::enclosure(val, 160);
          RInterval iv = RInterval::fromRatInterval(e, prec).abs();
          double hi = iv.hiDouble();
          if (hi > boxBound(l, c0) * (1.0 + 1e-12)) return;
        }
        bestV = vec;
        found = true;
        return;
      }
      long bb = coefBound[static_cast<size_t>(pos)];
      for (long v = -bb; v <= bb && !found; ++v) {
        coef[static_cast<size_t>(pos)] = v;
        recurse(pos + 1);
      }
    };
    recurse(0);
    if (!found) continue;

    out.v = bestV;
    out.boxConstant = c0;
    // realized products
    bool zero = false;
    RInterval lhs(prec);
    {
      RInterval acc = RInterval::fromLong(1, prec);
      for (int i = 0; i < m; ++i) {
        K val = formAt(i, bestV);
        if (FieldTraits<K>::isZero(val)) {
          zero = true;
          break;
        }
        acc = acc * RInterval::fromRatInterval(FieldTraits<K>::enclosure(val, 160), prec).abs();
      }
      lhs = acc;
    }
    out.lhsZero = zero;
    if (!zero) out.lhsLog = lhs.log().midDouble();
    {
      double acc = 0.0;
      for (int j = 0; j < n; ++j) {
        K val = formAt(m + j, bestV);
        double mag;
        if (FieldTraits<K>::isZero(val)) {
          mag = 0.0;
          acc = std::numeric_limits<double>::infinity();  // |.|^-ratio blows up
          break;
        }
        RatInterval e = FieldTraits<K>::enclosure(val, 160);
        mag = RInterval::fromRatInterval(e, prec).abs().log().midDouble();
        acc += -out.ratio.toDouble() * mag;
      }
      out.rhsLog = acc;
    }
    return out;
  }
  throw PrecisionError("dirichletWitness: no witness within the enumeration cap");
}

template <class K>
struct QuasiNorm {
  std::vector<Rat> alphas;   // positive
  Matrix<K> dualBasis;       // rows u_i^*

  void validate() const {
    if (alphas.size() != static_cast<size_t>(dualBasis.rows()))
      throw std::invalid_argument("QuasiNorm: alphas/basis size mismatch");
    for (const auto& a : alphas)
      if (!(Rat(0) < a)) throw std::invalid_argument("QuasiNorm: alphas must be positive");
    if (rank(dualBasis) != dualBasis.rows())
      throw std::invalid_argument("QuasiNorm: dual basis must be independent");
  }
};

/// Greedy growth-rate exponent: alphas sorted ascending (as in the exponent
/// theorem's normalization), then I_W = { i_j minimal with
/// u_{i_1}*,...,u_{i_j}* independent on W }; alpha(W) = sum of selected alphas.
template <class K>
Rat alphaGrowth(const Subspace<K>& w, const QuasiNorm<K>& qn) {
  if (w.dim() == 0) return Rat(0);
  qn.validate();
  const int d = static_cast<int>(qn.alphas.size());
  // ascending alpha order, stable on ties
  std::vector<int> order(static_cast<size_t>(d));
  for (int i = 0; i < d; ++i) order[static_cast<size_t>(i)] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return qn.alphas[static_cast<size_t>(a)] < qn.alphas[static_cast<size_t>(b)]; });

  Rat total(0);
  Matrix<K> sel(0, w.dim());
  for (int oi = 0; oi < d && sel.rows() < w.dim(); ++oi) {
    int i = order[static_cast<size_t>(oi)];
    // restriction of u_i^* to W, in basis coordinates
    Matrix<K> trial(sel.rows() + 1, w.dim());
    for (int r = 0; r < sel.rows(); ++r) trial.row(r) = sel.row(r);
    for (int c = 0; c < w.dim(); ++c) {
      K acc = FieldTraits<K>::zero();
      for (int j = 0; j < w.ambientDim(); ++j) acc = acc + qn.dualBasis(i, j) * w.basis()(c, j);
      trial(sel.rows(), c) = acc;
    }
    if (rank(trial) != trial.rows()) continue;
    sel = trial;
    total += qn.alphas[static_cast<size_t>(i)];
  }
  if (sel.rows() != w.dim()) throw std::logic_error("alphaGrowth: dual basis failed to span");
  return total;
}

template <class K>
struct BetaAlphaCertificate {
  ExtRat betaAlpha;
  Subspace<K> maximizer;
};

/// max over candidate W of min over samples y of
/// alpha(W cap ker y) / (dim W - dim(W cap ker y)); kernels are computed
/// exactly in the sample's field and intersected with the candidates there.
template <class K>
BetaAlphaCertificate<K> betaAlphaFormula(const HomFamily<K>& fam,
                                         const std::vector<Subspace<K>>& candidates,
                                         const QuasiNorm<K>& qn) {
  bool haveFull = false;
  for (const auto& w : candidates)
    if (w.isFullSpace()) haveFull = true;
  if (!haveFull) throw std::invalid_argument("betaAlphaFormula: candidates must include full space");
  BetaAlphaCertificate<K> best;
  bool first = true;
  for (const auto& w : candidates) {
    if (w.dim() == 0) continue;
    ExtRat wVal = ExtRat::infinity();
    bool sampleSeen = false;
    for (const auto& y : fam.samples) {
      Subspace<K> ker = Subspace<K>::fromRows(kernelBasis<K>(y));
      Subspace<K> cap = intersectSubspaces(w, ker);
      int drop = w.dim() - cap.dim();
      ExtRat val = drop == 0 ? ExtRat::infinity()
                             : ExtRat::of(alphaGrowth(cap, qn) / Rat(drop));
      if (!sampleSeen || val < wVal) wVal = val;
      sampleSeen = true;
    }
    if (first || best.betaAlpha < wVal) {
      best.betaAlpha = wVal;
      best.maximizer = w;
      first = false;
    }
  }
  return best;
}

/// beta = (n+m)/(gamma+m) - 1 with gamma the smallest polygon slope, for the
/// flow with m leading weights n and n trailing weights -m.
inline Rat gammaBridge(const GraysonPolygon& polygon, int n, int m) {
  polygon.validate();
  auto slopes = polygon.segmentSlopes();
  Rat gamma = slopes.front();
  if (!(Rat(0) < gamma + Rat(m)))
    throw std::domain_error("gammaBridge: degenerate (gamma + m <= 0)");
  return Rat(n + m) / (gamma + Rat(m)) - Rat(1);
}

}  // namespace hnflow
