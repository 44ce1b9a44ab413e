#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <functional>

#include "hnflow/exponents.hpp"
#include "hnflow/hn.hpp"

using namespace hnflow;

namespace {

FieldPtr sqrt2Field() {
  return std::make_shared<NumberField>(std::vector<Rat>{Rat(-2), Rat(0), Rat(1)},
                                       RatInterval(Rat(1), Rat(2)), "t");
}

MatQ matQ(std::initializer_list<std::initializer_list<long>> rows) {
  MatQ m(static_cast<int>(rows.size()), static_cast<int>(rows.begin()->size()));
  int i = 0;
  for (const auto& r : rows) {
    int j = 0;
    for (long v : r) m(i, j++) = Rat(v);
    ++i;
  }
  return m;
}

std::vector<Subspace<NFElem>> candidatesNF(int d, int height) {
  auto c = heightBoundedSubspaces<NFElem>(d, height);
  c.push_back(Subspace<NFElem>::full(d));
  return c;
}

std::vector<Subspace<Rat>> candidatesQ(int d, int height) {
  auto c = heightBoundedSubspaces<Rat>(d, height);
  c.push_back(Subspace<Rat>::full(d));
  return c;
}

/// v in conv(others)? Caratheodory over exact rationals: some affinely
/// independent subset of size <= dim+1 contains v in its convex hull.
bool inConvexHull(const std::vector<VecQ>& others, const VecQ& v) {
  const int dim = static_cast<int>(v.size());
  const int n = static_cast<int>(others.size());
  std::vector<int> subset;
  std::function<bool(int, int)> rec = [&](int start, int want) -> bool {
    if (want == 0) {
      // solve sum lambda_i p_i = v, sum lambda = 1, lambda >= 0
      int k = static_cast<int>(subset.size());
      MatQ a(dim + 1, k + 1);
      for (int i = 0; i < dim; ++i) {
        for (int c = 0; c < k; ++c) a(i, c) = others[static_cast<size_t>(subset[static_cast<size_t>(c)])](i);
        a(i, k) = v(i);
      }
      for (int c = 0; c < k; ++c) a(dim, c) = Rat(1);
      a(dim, k) = Rat(1);
      auto rr = rref(a);
      // consistent iff no pivot in the last column
      for (int p : rr.pivots)
        if (p == k) return false;
      if (rr.rank < k) return false;  // affinely dependent subset; skip
      for (int i = 0; i < k; ++i)
        if (rr.mat(i, k) < Rat(0)) return false;
      return true;
    }
    for (int i = start; i <= n - want; ++i) {
      subset.push_back(i);
      if (rec(i + 1, want - 1)) return true;
      subset.pop_back();
    }
    return false;
  };
  for (int size = 1; size <= dim + 1 && size <= n; ++size)
    if (rec(0, size)) return true;
  return false;
}

}  // namespace

TEST_CASE("rankImage: zero subspace, rank-1 map, restricted line") {
  NFElem s2 = NFElem::generator(sqrt2Field());
  Matrix<NFElem> x(1, 2);
  x(0, 0) = NFElem(1);
  x(0, 1) = s2;
  HomFamily<NFElem> fam({x});
  CHECK(rankImage(fam, Subspace<NFElem>::zero(2)) == 0);
  CHECK(rankImage(fam, Subspace<NFElem>::full(2)) == 1);
  Vector<NFElem> dir(2);
  dir(0) = NFElem(-1);
  dir(1) = NFElem(1);
  CHECK(rankImage(fam, Subspace<NFElem>::span(dir)) == 1);  // sqrt2 - 1 != 0
}

TEST_CASE("betaFormula: Roth exponent, rational kernel, full-rank family") {
  NFElem s2 = NFElem::generator(sqrt2Field());
  Matrix<NFElem> x(1, 2);
  x(0, 0) = NFElem(1);
  x(0, 1) = s2;
  HomFamily<NFElem> fam({x});
  auto cert = betaFormula(fam, candidatesNF(2, 5));
  CHECK_FALSE(cert.beta.infinite);
  CHECK(cert.beta.value == Rat(1));  // 2/1 - 1

  // [0, 1]: the line <e1> is a rational kernel
  MatQ x0 = matQ({{0, 1}});
  HomFamily<Rat> fam0({x0});
  auto cert0 = betaFormula(fam0, candidatesQ(2, 3));
  CHECK(cert0.beta.infinite);
  CHECK(cert0.r == 0);
  CHECK(cert0.maximizer.dim() >= 1);

  // full rank on every candidate: beta = d/m - 1 at the full space
  MatQ xf = matQ({{1, 0, 0}, {0, 1, 0}});
  HomFamily<Rat> famF({xf});
  auto certF = betaFormula(famF, candidatesQ(3, 2));
  CHECK_FALSE(certF.beta.infinite);
  CHECK(certF.beta.value == Rat(1, 2));  // 3/2 - 1
}

TEST_CASE("sRank fixtures") {
  NFElem s2 = NFElem::generator(sqrt2Field());
  Matrix<NFElem> y(1, 1);
  y(0, 0) = s2;
  CHECK(sRank(y, {0}, Subspace<NFElem>::full(2)) == 1);

  Matrix<Rat> y0(1, 1);
  y0(0, 0) = Rat(0);
  // W = <e2> (p = 0 line): the form Y q - p vanishes
  VecQ e2(2);
  e2(0) = Rat(0);
  e2(1) = Rat(1);
  CHECK(sRank(y0, {0}, Subspace<Rat>::span(e2)) == 0);
  CHECK(sRank(y0, {0}, Subspace<Rat>::full(2)) == 1);
}

TEST_CASE("omegaFormula: generic base case, Y=0 kernel branch, sqrt2 Roth-consistent") {
  // generic full space base case: ratio exactly 1
  MatQ yg = matQ({{2}});
  auto certG = omegaFormula<Rat>({yg}, candidatesQ(2, 3));
  CHECK_FALSE(certG.omega.infinite);
  CHECK(certG.omega.value == Rat(1));

  MatQ y0 = matQ({{0}});
  auto cert0 = omegaFormula<Rat>({y0}, candidatesQ(2, 3));
  CHECK(cert0.omega.infinite);
  CHECK(cert0.r == 0);
  VecQ e2(2);
  e2(0) = Rat(0);
  e2(1) = Rat(1);
  CHECK(cert0.w == Subspace<Rat>::span(e2));

  NFElem s2 = NFElem::generator(sqrt2Field());
  Matrix<NFElem> y(1, 1);
  y(0, 0) = s2;
  auto cert = omegaFormula<NFElem>({y}, candidatesNF(2, 8));
  CHECK_FALSE(cert.omega.infinite);
  CHECK(cert.omega.value == Rat(1));
}

TEST_CASE("polytopeVertices: tiny shapes, exact inequalities, vertex property") {
  auto v11 = polytopeVertices(1, 1);
  REQUIRE(v11.size() == 1);
  CHECK(v11[0].c == std::vector<Rat>{Rat(1)});
  CHECK(v11[0].d == std::vector<Rat>{Rat(1)});

  auto v21 = polytopeVertices(2, 1);
  REQUIRE(v21.size() == 2);
  CHECK(v21[0].c == std::vector<Rat>{Rat(1), Rat(0)});
  CHECK(v21[1].c == std::vector<Rat>{Rat(1, 2), Rat(1, 2)});
  for (const auto& v : v21) CHECK(v.d == std::vector<Rat>{Rat(1)});

  // each vertex satisfies sum(d) = sum(c) exactly
  for (auto [f, g] : {std::pair<int, int>{2, 2}, {3, 2}, {2, 3}}) {
    auto vs = polytopeVertices(f, g);
    CHECK(static_cast<int>(vs.size()) == f * g);
    for (const auto& v : vs) {
      Rat sc(0), sd(0);
      for (const auto& q : v.c) sc += q;
      for (const auto& q : v.d) sd += q;
      CHECK(sc == sd);
    }
    // vertex property: no vertex is a convex combination of the others
    std::vector<VecQ> pts;
    for (const auto& v : vs) {
      VecQ p(f + g);
      for (int i = 0; i < f; ++i) p(i) = v.c[static_cast<size_t>(i)];
      for (int j = 0; j < g; ++j) p(f + j) = v.d[static_cast<size_t>(j)];
      pts.push_back(p);
    }
    for (size_t i = 0; i < pts.size(); ++i) {
      std::vector<VecQ> others;
      for (size_t j = 0; j < pts.size(); ++j)
        if (j != i) others.push_back(pts[j]);
      CHECK_FALSE(inConvexHull(others, pts[i]));
    }
  }
}

TEST_CASE("dirichletWitness: sqrt2 box, kernel branch, unit box") {
  NFElem s2 = NFElem::generator(sqrt2Field());
  Matrix<NFElem> y(1, 1);
  y(0, 0) = s2;
  auto w = dirichletWitness(y, Subspace<NFElem>::full(2), {0}, {0}, Rat(10));
  CHECK_FALSE(w.kernelBranch);
  // |sqrt2 q - p| <= 1/10 and |q| <= 10: the witness is a convergent pair
  NFElem l1 = s2 * NFElem(Rat(w.v(1))) - NFElem(Rat(w.v(0)));
  RatInterval e = l1.enclosure(80);
  CHECK(e.hi.abs() <= Rat(1, 9));  // slight slack over 1/10 for the enclosure
  Int qAbs;
  mpz_abs(qAbs.get_mpz_t(), w.v(1).get_mpz_t());
  CHECK(qAbs <= 10);

  Matrix<Rat> y0(1, 1);
  y0(0, 0) = Rat(0);
  VecQ e2(2);
  e2(0) = Rat(0);
  e2(1) = Rat(1);
  auto wk = dirichletWitness(y0, Subspace<Rat>::span(e2), {0}, {0}, Rat(10));
  CHECK(wk.kernelBranch);
  CHECK(wk.lhsZero);

  auto w1 = dirichletWitness(y, Subspace<NFElem>::full(2), {0}, {0}, Rat(1));
  bool nonzero = w1.v(0) != 0 || w1.v(1) != 0;
  CHECK(nonzero);
}

TEST_CASE("dirichletWitness: product bound holds along a Q-sweep (infinitude surrogate)") {
  NFElem s2 = NFElem::generator(sqrt2Field());
  Matrix<NFElem> y(1, 1);
  y(0, 0) = s2;
  // omega ratio for (I, J) = ({1},{1}), W = full: (2-1)*1/(1*(2-1)) = 1
  Int lastQ(0);
  for (long q : {10, 100, 1000}) {
    auto w = dirichletWitness(y, Subspace<NFElem>::full(2), {0}, {0}, Rat(q));
    CHECK(w.ratio == Rat(1));
    // realized: prod_{i<=m} |L_i(v)| <= C * prod_j |L_{m+j}(v)|^{-1} with C = 1.1:
    // |sqrt2 q - p| <= Q^{-1} <= |q|^{-1} * (|q|/Q) and |q| <= Q
    CHECK(w.lhsLog <= std::log(1.1) + w.rhsLog);
    Int qAbs;
    mpz_abs(qAbs.get_mpz_t(), w.v(1).get_mpz_t());
    CHECK(lastQ < qAbs);  // witnesses grow with Q: infinitude surrogate
    lastQ = qAbs;
  }
}

TEST_CASE("alphaGrowth: full space, unit alphas, vanishing first form") {
  QuasiNorm<Rat> qn;
  qn.alphas = {Rat(1), Rat(2)};
  qn.dualBasis = matQ({{1, 0}, {0, 1}});
  CHECK(alphaGrowth(Subspace<Rat>::full(2), qn) == Rat(3));

  QuasiNorm<Rat> unit;
  unit.alphas = {Rat(1), Rat(1), Rat(1)};
  unit.dualBasis = matQ({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}});
  auto plane = Subspace<Rat>::fromRows(matQ({{1, 2, 0}, {0, 0, 1}}));
  CHECK(alphaGrowth(plane, unit) == Rat(2));

  VecQ e2(2);
  e2(0) = Rat(0);
  e2(1) = Rat(1);
  CHECK(alphaGrowth(Subspace<Rat>::span(e2), qn) == Rat(2));  // u_1*|_W = 0
  CHECK(alphaGrowth(Subspace<Rat>::zero(2), qn) == Rat(0));
}

TEST_CASE("alphaGrowth uses the ascending-alpha greedy (tilted line fixture)") {
  // alphas (5, 1): on span{(1,1)} the ball volume grows like R^1, not R^5
  QuasiNorm<Rat> qn;
  qn.alphas = {Rat(5), Rat(1)};
  qn.dualBasis = matQ({{1, 0}, {0, 1}});
  VecQ diag(2);
  diag(0) = Rat(1);
  diag(1) = Rat(1);
  CHECK(alphaGrowth(Subspace<Rat>::span(diag), qn) == Rat(1));
}

TEST_CASE("alphaGrowth matches the lattice-point counting oracle") {
  // count integer points of W with quasi-norm <= R for growing R; the count
  // grows like R^{alpha(W)}
  auto countBall = [](const Subspace<Rat>& w, const QuasiNorm<Rat>& qn, double r) {
    MatZ basis = w.integralBasis();
    const int k = static_cast<int>(basis.rows());
    const int d = w.ambientDim();
    // crude coefficient box: |coef| <= r^{max alpha} * d * maxEntry margin
    double maxAlpha = 0;
    for (const auto& a : qn.alphas) maxAlpha = std::max(maxAlpha, a.toDouble());
    long bound = static_cast<long>(std::pow(r, maxAlpha)) * 4 + 4;
    long count = 0;
    std::vector<long> c(static_cast<size_t>(k), 0);
    std::function<void(int)> rec = [&](int pos) {
      if (pos == k) {
        double qnVal = 0;
        for (int i = 0; i < d; ++i) {
          double form = 0;
          for (int j = 0; j < d; ++j) {
            double coord = 0;
            for (int b = 0; b < k; ++b)
              coord += static_cast<double>(c[static_cast<size_t>(b)]) * basis(b, j).get_d();
            form += qn.dualBasis(i, j).toDouble() * coord;
          }
          qnVal = std::max(qnVal,
                           std::pow(std::abs(form), 1.0 / qn.alphas[static_cast<size_t>(i)].toDouble()));
        }
        if (qnVal <= r) ++count;
        return;
      }
      for (long v = -bound; v <= bound; ++v) {
        c[static_cast<size_t>(pos)] = v;
        rec(pos + 1);
      }
    };
    rec(0);
    return count;
  };

  QuasiNorm<Rat> qn;
  qn.alphas = {Rat(2), Rat(1)};
  qn.dualBasis = matQ({{1, 0}, {0, 1}});
  VecQ diag(2);
  diag(0) = Rat(1);
  diag(1) = Rat(1);
  for (const Subspace<Rat>& w : {Subspace<Rat>::full(2), Subspace<Rat>::span(diag)}) {
    double a = alphaGrowth(w, qn).toDouble();
    double c1 = static_cast<double>(countBall(w, qn, 6.0));
    double c2 = static_cast<double>(countBall(w, qn, 24.0));
    double slope = std::log(c2 / c1) / std::log(4.0);
    CHECK(std::abs(slope - a) <= 0.4);
  }
}

TEST_CASE("alphaGrowth is monotone under inclusion") {
  Rng rng(55);
  QuasiNorm<Rat> qn;
  qn.alphas = {Rat(1), Rat(2), Rat(3)};
  qn.dualBasis = matQ({{1, 1, 0}, {0, 1, 1}, {1, 0, 1}});
  for (int trial = 0; trial < 50; ++trial) {
    auto w = randomSubspace<Rat>(rng, 3);
    auto wBig = sumSubspaces(w, randomSubspace<Rat>(rng, 3));
    CHECK(alphaGrowth(w, qn) <= alphaGrowth(wBig, qn));
  }
}

TEST_CASE("betaAlphaFormula: unit alphas reduce to betaFormula; kernels exact in the field") {
  NFElem s2 = NFElem::generator(sqrt2Field());
  Matrix<NFElem> x(1, 2);
  x(0, 0) = NFElem(1);
  x(0, 1) = s2;
  HomFamily<NFElem> fam({x});
  QuasiNorm<NFElem> unit;
  unit.alphas = {Rat(1), Rat(1)};
  Matrix<NFElem> id(2, 2);
  id.setConstant(NFElem(0));
  id(0, 0) = NFElem(1);
  id(1, 1) = NFElem(1);
  unit.dualBasis = id;
  auto candidates = candidatesNF(2, 5);
  auto ba = betaAlphaFormula(fam, candidates, unit);
  auto b = betaFormula(fam, candidates);
  CHECK_FALSE(ba.betaAlpha.infinite);
  CHECK(ba.betaAlpha.value == b.beta.value);  // both equal 1 (Roth)
  CHECK(ba.betaAlpha.value == Rat(1));

  MatQ x0 = matQ({{0, 1}});
  HomFamily<Rat> fam0({x0});
  QuasiNorm<Rat> unitQ;
  unitQ.alphas = {Rat(1), Rat(1)};
  unitQ.dualBasis = matQ({{1, 0}, {0, 1}});
  auto ba0 = betaAlphaFormula(fam0, candidatesQ(2, 3), unitQ);
  CHECK(ba0.betaAlpha.infinite);  // <e1> inside every kernel
}

TEST_CASE("betaAlpha equals beta for unit alphas and full-rank samples (random)") {
  Rng rng(66);
  for (int trial = 0; trial < 20; ++trial) {
    MatQ x(2, 3);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 3; ++j) x(i, j) = Rat(rng.intIn(-3, 3));
    if (rank(x) != 2) continue;
    HomFamily<Rat> fam({x});
    QuasiNorm<Rat> unit;
    unit.alphas = {Rat(1), Rat(1), Rat(1)};
    unit.dualBasis = matQ({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}});
    auto candidates = candidatesQ(3, 3);
    auto ba = betaAlphaFormula(fam, candidates, unit);
    auto b = betaFormula(fam, candidates);
    CHECK(ba.betaAlpha == b.beta);
  }
}

TEST_CASE("gammaBridge: semistable polygon, Roth case, monotone in gamma") {
  GraysonPolygon flat;
  flat.vertices = {{0, Rat(0)}, {3, Rat(0)}};
  CHECK(gammaBridge(flat, 1, 2) == Rat(1, 2));
  CHECK(gammaBridge(flat, 2, 1) == Rat(2));

  GraysonPolygon roth;
  roth.vertices = {{0, Rat(0)}, {2, Rat(0)}};
  CHECK(gammaBridge(roth, 1, 1) == Rat(1));

  GraysonPolygon dipped;
  dipped.vertices = {{0, Rat(0)}, {1, Rat(-1, 2)}, {2, Rat(0)}};
  CHECK(gammaBridge(roth, 1, 1) < gammaBridge(dipped, 1, 1));  // beta decreasing in gamma

  GraysonPolygon degenerate;
  degenerate.vertices = {{0, Rat(0)}, {1, Rat(-2)}, {2, Rat(0)}};
  CHECK_THROWS(gammaBridge(degenerate, 1, 1));
}

TEST_CASE("omega certificate pencils contain every sample (exact rank recheck)") {
  NFElem s2 = NFElem::generator(sqrt2Field());
  Matrix<NFElem> y(1, 1);
  y(0, 0) = s2;
  auto candidates = candidatesNF(2, 5);
  auto cert = omegaFormula<NFElem>({y}, candidates);
  // recheck: s_{I,W} <= r and s_{J,W} <= s for the (only) sample
  CHECK(sRank(y, cert.setI, cert.w) <= cert.r);
  CHECK(sRank(y, cert.setJ, cert.w) <= cert.s);
}

TEST_CASE("omega formula vs finite-height scan: band-consistency checks") {
  // The naive per-solution exponent -log(prod)/log(Pi+) exceeds the
  // asymptotic sup at any finite height (good convergents beat it by
  // O(1/log q)), so the sound finite checks are:
  // (a) no hits at exponent omega + delta in the top dyadic band,
  // (b) hits at exponent omega - delta persist in every band.
  NFElem s2 = NFElem::generator(sqrt2Field());
  // hits of |sqrt2 q - p| <= q^{-w} for q in [1, height]
  auto multiplicativeHits = [&](const Rat& w, long height) {
    std::vector<long> qs;
    const mpfr_prec_t prec = 192;
    for (long q = 1; q <= height; ++q) {
      RInterval qs2 = RInterval::fromRatInterval((s2 * NFElem(Rat(q))).enclosure(220), prec);
      long p = qs2.roundMidToLong();
      RInterval resid = (qs2 - RInterval::fromLong(p, prec)).abs();
      RInterval rhs = (RInterval::logOfRat(Rat(q), prec) * RInterval::fromRat(-w, prec)).exp();
      if (RInterval::certainlyLeq(resid, rhs)) qs.push_back(q);
    }
    return qs;
  };
  const Rat omega(1);  // exact value from omegaFormula for Y = sqrt2
  auto hitsHigh = multiplicativeHits(omega + Rat(1, 2), 1000);
  for (long q : hitsHigh) CHECK(q <= 250);  // none in the top band
  auto hitsLow = multiplicativeHits(omega - Rat(1, 2), 1000);
  bool bands[3] = {false, false, false};
  for (long q : hitsLow) {
    if (q >= 16 && q < 64) bands[0] = true;
    if (q >= 64 && q < 256) bands[1] = true;
    if (q >= 256 && q <= 1000) bands[2] = true;
  }
  CHECK(bands[0]);
  CHECK(bands[1]);
  CHECK(bands[2]);
}
