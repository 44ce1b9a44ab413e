#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "hnflow/simulate.hpp"

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

MatQ identityQ(int d) {
  MatQ m = MatQ::Zero(d, d);
  for (int i = 0; i < d; ++i) m(i, i) = Rat(1);
  return m;
}

IMatrix fromRational(const MatQ& m, mpfr_prec_t prec = 128) {
  IMatrix b(static_cast<int>(m.rows()), static_cast<int>(m.cols()), prec);
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) b.at(i, j) = RInterval::fromRat(m(i, j), prec);
  return b;
}

HNFiltration<Rat> filtrationOf(const MatQ& l, const Flow& a) {
  auto fam = MatrixFamily<Rat>::singleton(l);
  auto lat = closeLattice(familyFlagGenerators(fam, a), static_cast<int>(l.rows()));
  return hnFiltration(memoized(tauOracle(fam, a)), lat);
}

}  // namespace

TEST_CASE("successive minima: identity, orthogonal diagonal, skewed 2x2") {
  auto r1 = successiveMinima(fromRational(identityQ(2)));
  CHECK(r1.minima[0].midDouble() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(r1.minima[1].midDouble() == doctest::Approx(1.0).epsilon(1e-12));
  // minimizers are +-e1, +-e2 up to canonical sign
  MatQ coeffs(2, 2);
  for (int k = 0; k < 2; ++k)
    for (int j = 0; j < 2; ++j) coeffs(k, j) = Rat(r1.minimizers[static_cast<size_t>(k)](j));
  CHECK(rank(coeffs) == 2);

  MatQ diag(2, 2);
  diag(0, 0) = Rat(1, 2);
  diag(0, 1) = Rat(0);
  diag(1, 0) = Rat(0);
  diag(1, 1) = Rat(2);
  auto r2 = successiveMinima(fromRational(diag));
  CHECK(r2.minima[0].midDouble() == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(r2.minima[1].midDouble() == doctest::Approx(2.0).epsilon(1e-12));

  // columns (1,0) and (3/5, 1): lambda = (1, sqrt(1.16)), second minimizer (-1, 1)
  MatQ b(2, 2);
  b(0, 0) = Rat(1);
  b(0, 1) = Rat(3, 5);
  b(1, 0) = Rat(0);
  b(1, 1) = Rat(1);
  auto r3 = successiveMinima(fromRational(b));
  CHECK(r3.minima[0].midDouble() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(r3.minima[1].midDouble() == doctest::Approx(std::sqrt(1.16)).epsilon(1e-12));
  // +-(-1, 1): canonical sign makes the first entry positive
  CHECK(r3.minimizers[1](0) == Int(1));
  CHECK(r3.minimizers[1](1) == Int(-1));
}

TEST_CASE("minima agree with the coefficient-box oracle on random bases") {
  Rng rng(2024);
  int done = 0;
  while (done < 25) {
    int d = static_cast<int>(rng.intIn(2, 3));
    MatQ b(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) b(i, j) = Rat(rng.intIn(-3, 3));
    if (determinant<Rat>(b).isZero()) continue;
    MatQ binv = inverse<Rat>(b);
    Rat maxCol2(0);
    for (int j = 0; j < d; ++j) {
      Rat acc(0);
      for (int i = 0; i < d; ++i) acc += b(i, j) * b(i, j);
      maxCol2 = std::max(maxCol2, acc);
    }
    bool wellConditioned = true;
    for (int i = 0; i < d; ++i) {
      Rat rowInv2(0);
      for (int j = 0; j < d; ++j) rowInv2 += binv(i, j) * binv(i, j);
      if (Rat(100) < maxCol2 * rowInv2) wellConditioned = false;
    }
    if (!wellConditioned) continue;
    ++done;
    auto ib = fromRational(b);
    auto fast = successiveMinima(ib);
    auto oracle = minimaByBox(ib, 10);
    for (int k = 0; k < d; ++k) {
      double a = fast.minima[static_cast<size_t>(k)].midDouble();
      double o = oracle.minima[static_cast<size_t>(k)].midDouble();
      CHECK(std::abs(a - o) <= 1e-10 * std::max(1.0, std::abs(o)));
    }
  }
}

TEST_CASE("minima are monotone and minimizers integrally independent") {
  Rng rng(88);
  for (int trial = 0; trial < 20; ++trial) {
    int d = static_cast<int>(rng.intIn(2, 3));
    MatQ b(d, d);
    do {
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) b(i, j) = Rat(rng.intIn(-4, 4));
    } while (determinant<Rat>(b).isZero());
    auto res = successiveMinima(fromRational(b));
    for (int k = 1; k < d; ++k)
      CHECK(res.minima[static_cast<size_t>(k - 1)].midDouble() <=
            res.minima[static_cast<size_t>(k)].midDouble() * (1 + 1e-12));
    MatQ coeffs(d, d);
    for (int k = 0; k < d; ++k)
      for (int j = 0; j < d; ++j) coeffs(k, j) = Rat(res.minimizers[static_cast<size_t>(k)](j));
    CHECK(rank(coeffs) == d);
  }
}

TEST_CASE("sup-norm option agrees with Euclidean on the identity and differs on a tilt") {
  MinimaOptions opts;
  opts.norm = NormKind::Sup;
  auto rs = successiveMinima(fromRational(identityQ(2)), opts);
  CHECK(rs.minima[0].midDouble() == doctest::Approx(1.0).epsilon(1e-12));

  // basis (1,1), (1,-1): Euclidean lambda_1 = sqrt2, sup-norm lambda_1 = 1
  MatQ b(2, 2);
  b(0, 0) = Rat(1);
  b(0, 1) = Rat(1);
  b(1, 0) = Rat(1);
  b(1, 1) = Rat(-1);
  auto re = successiveMinima(fromRational(b));
  auto rsup = successiveMinima(fromRational(b), opts);
  CHECK(re.minima[0].midDouble() == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  CHECK(rsup.minima[0].midDouble() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("simulate: diagonal lattice is exact") {
  SimConfig<Rat> cfg;
  cfg.l = identityQ(2);
  cfg.a = Flow({Rat(1), Rat(-1)});
  cfg.tGrid = {Rat(10)};
  auto filt = filtrationOf(cfg.l, cfg.a);
  auto series = simulate(cfg, filt);
  const auto& s = series.snapshots[0];
  CHECK(s.logMinimaOverT[0] == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(s.logMinimaOverT[1] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("simulate: sqrt2 lattice stays in a bounded band (badly approximable)") {
  SimConfig<NFElem> cfg;
  NFElem s2 = NFElem::generator(sqrt2Field());
  Matrix<NFElem> l(2, 2);
  l(0, 0) = NFElem(1);
  l(0, 1) = s2;
  l(1, 0) = NFElem(0);
  l(1, 1) = NFElem(1);
  cfg.l = l;
  cfg.a = Flow({Rat(1), Rat(-1)});
  cfg.tGrid = {Rat(25)};
  HNFiltration<NFElem> trivial;
  trivial.chain = {Subspace<NFElem>::zero(2), Subspace<NFElem>::full(2)};
  trivial.values = {Rat(0), Rat(0)};
  trivial.slopes = {Rat(0)};
  auto series = simulate(cfg, trivial);
  CHECK(std::abs(series.snapshots[0].logMinimaOverT[0]) <= 0.08);
}

TEST_CASE("simulate: identity d=3 capture from the first grid point") {
  SimConfig<Rat> cfg;
  cfg.l = identityQ(3);
  cfg.a = Flow({Rat(1), Rat(0), Rat(-1)});
  for (int t = 1; t <= 5; ++t) cfg.tGrid.push_back(Rat(t));
  auto filt = filtrationOf(cfg.l, cfg.a);
  auto series = simulate(cfg, filt);
  REQUIRE(series.captureTime.size() == 2);
  CHECK(*series.captureTime[0] == Rat(1));
  CHECK(*series.captureTime[1] == Rat(1));
  // minimizers are e3, e2, e1 at every t
  for (const auto& s : series.snapshots) {
    CHECK(s.minimizers[0](2) != 0);
    CHECK(s.minimizers[1](1) != 0);
    CHECK(s.minimizers[2](0) != 0);
  }
}

TEST_CASE("scaling invariance: a uniform basis scale shifts all log minima equally") {
  MatQ b = matQ({{2, 1}, {1, 1}});
  auto r1 = successiveMinima(fromRational(b));
  MatQ scaled = b;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) scaled(i, j) = b(i, j) * Rat(3);
  auto r2 = successiveMinima(fromRational(scaled));
  for (int k = 0; k < 2; ++k) {
    double shift = std::log(r2.minima[static_cast<size_t>(k)].midDouble()) -
                   std::log(r1.minima[static_cast<size_t>(k)].midDouble());
    CHECK(shift == doctest::Approx(std::log(3.0)).epsilon(1e-10));
  }
}

TEST_CASE("estimateSlopes: exact diagonal case and constant series") {
  SimConfig<Rat> cfg;
  cfg.l = identityQ(2);
  cfg.a = Flow({Rat(1), Rat(-1)});
  for (int t = 1; t <= 6; ++t) cfg.tGrid.push_back(Rat(t));
  auto series = simulate(cfg, filtrationOf(cfg.l, cfg.a));
  auto slopes = estimateSlopes(series, 6);
  CHECK(slopes[0] == doctest::Approx(-1.0).epsilon(1e-10));
  CHECK(slopes[1] == doctest::Approx(1.0).epsilon(1e-10));

  SimConfig<Rat> flat;
  flat.l = identityQ(2);
  flat.a = Flow({Rat(0), Rat(0)});
  for (int t = 1; t <= 4; ++t) flat.tGrid.push_back(Rat(t));
  auto fseries = simulate(flat, filtrationOf(flat.l, flat.a));
  auto fslopes = estimateSlopes(fseries, 4);
  CHECK(fslopes[0] == doctest::Approx(0.0).epsilon(1e-10));
  CHECK_THROWS(estimateSlopes(fseries, 1));
}

TEST_CASE("Minkowski residual: identity at t=0-like, unit covolume, bounded band") {
  // diag(1/2, 2): sum log lambda = 0 = log covol
  MatQ b(2, 2);
  b(0, 0) = Rat(1, 2);
  b(0, 1) = Rat(0);
  b(1, 0) = Rat(0);
  b(1, 1) = Rat(2);
  auto res = successiveMinima(fromRational(b));
  double sumLog = std::log(res.minima[0].midDouble()) + std::log(res.minima[1].midDouble());
  CHECK(sumLog == doctest::Approx(0.0).epsilon(1e-10));

  SimConfig<NFElem> cfg;
  NFElem s2 = NFElem::generator(sqrt2Field());
  Matrix<NFElem> l(2, 2);
  l(0, 0) = NFElem(1);
  l(0, 1) = s2;
  l(1, 0) = NFElem(0);
  l(1, 1) = NFElem(1);
  cfg.l = l;
  cfg.a = Flow({Rat(1), Rat(-1)});
  cfg.tGrid = {Rat(10), Rat(20), Rat(30)};
  HNFiltration<NFElem> trivial;
  trivial.chain = {Subspace<NFElem>::zero(2), Subspace<NFElem>::full(2)};
  trivial.values = {Rat(0), Rat(0)};
  trivial.slopes = {Rat(0)};
  auto series = simulate(cfg, trivial);
  for (const auto& s : series.snapshots) {
    CHECK(s.minkowskiResidual <= minkowskiBound(2));
    CHECK(minkowskiResidual(s, cfg.l, cfg.a, s.t) == doctest::Approx(s.minkowskiResidual).epsilon(1e-9));
  }
}

TEST_CASE("rational flows: (1/t)log lambda becomes exactly piecewise equal to Lambda") {
  SimConfig<Rat> cfg;
  cfg.l = matQ({{1, 1}, {0, 1}});
  cfg.a = Flow({Rat(1), Rat(-1)});
  for (int t = 2; t <= 8; ++t) cfg.tGrid.push_back(Rat(t));
  auto filt = filtrationOf(cfg.l, cfg.a);
  auto series = simulate(cfg, filt);
  // after capture, lambda_1 = e^{-t}|det-normalized direction| exactly:
  // a_t L (-1,1) = (0, e^{-t}), so log lambda_1 / t = -1 exactly
  for (const auto& s : series.snapshots) {
    CHECK(s.logMinimaOverT[0] == doctest::Approx(-1.0).epsilon(1e-10));
    CHECK(s.logMinimaOverT[1] == doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("captureReport: rational fixture passes, corrupted prediction is falsified") {
  SimConfig<Rat> cfg;
  cfg.l = matQ({{1, 1}, {0, 1}});
  cfg.a = Flow({Rat(1), Rat(-1)});
  for (int t = 1; t <= 10; ++t) cfg.tGrid.push_back(Rat(t));
  auto filt = filtrationOf(cfg.l, cfg.a);
  VecQ dir(2);
  dir(0) = Rat(-1);
  dir(1) = Rat(1);
  REQUIRE(filt.chain[1] == Subspace<Rat>::span(dir));

  auto series = simulate(cfg, filt);
  auto verdicts = captureReport(series, filt, Rat(1, 2));
  for (const auto& v : verdicts) {
    CHECK(v.pass);
    CHECK(*v.firstOkT <= Rat(2));
  }

  HNFiltration<Rat> corrupted = filt;
  VecQ e1(2);
  e1(0) = Rat(1);
  e1(1) = Rat(0);
  corrupted.chain[1] = Subspace<Rat>::span(e1);
  auto series2 = simulate(cfg, corrupted);
  auto bad = captureReport(series2, corrupted, Rat(1, 2));
  bool anyFail = false;
  for (const auto& v : bad) anyFail = anyFail || !v.pass;
  CHECK(anyFail);
}

TEST_CASE("degenerate flow: simulator still runs, slopes are the constant") {
  SimConfig<Rat> cfg;
  cfg.l = matQ({{2, 1}, {1, 1}});
  cfg.a = Flow({Rat(1), Rat(1)});
  for (int t = 1; t <= 4; ++t) cfg.tGrid.push_back(Rat(t));
  auto series = simulate(cfg, filtrationOf(cfg.l, cfg.a));
  auto slopes = estimateSlopes(series, 4);
  CHECK(slopes[0] == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(slopes[1] == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("config validation: grids and shapes") {
  SimConfig<Rat> cfg;
  cfg.l = identityQ(2);
  cfg.a = Flow({Rat(1), Rat(-1)});
  cfg.tGrid = {Rat(2), Rat(1)};
  CHECK_THROWS(cfg.validate());
  cfg.tGrid = {Rat(-1)};
  CHECK_THROWS(cfg.validate());
  cfg.tGrid = {Rat(1), Rat(2)};
  CHECK_NOTHROW(cfg.validate());
}
