#pragma once

#include <cmath>
#include <optional>
#include <vector>

#include "hnflow/hn.hpp"
#include "hnflow/minima.hpp"

namespace hnflow {

template <class K>
struct SimConfig {
  Matrix<K> l;
  Flow a;
  std::vector<Rat> tGrid;  // strictly increasing, positive
  long precisionMarginBits = 64;
  Rat enumerationBoundFactor = Rat(6, 5);
  NormKind norm = NormKind::Euclidean;

  void validate() const {
    const int d = static_cast<int>(l.rows());
    if (l.cols() != d || a.dim() != d) throw std::invalid_argument("SimConfig: dim mismatch");
    for (size_t i = 0; i < tGrid.size(); ++i) {
      if (!(Rat(0) < tGrid[i])) throw std::invalid_argument("SimConfig: t must be positive");
      if (i > 0 && !(tGrid[i - 1] < tGrid[i]))
        throw std::invalid_argument("SimConfig: t grid must be strictly increasing");
    }
  }
};

struct Snapshot {
  Rat t;
  std::vector<double> minima;          // lambda_k midpoints (unscaled)
  std::vector<double> logMinima;       // log lambda_k
  std::vector<double> logMinimaOverT;
  std::vector<VecZ> minimizers;        // integer vectors in Z^d
  double covolLog = 0.0;
  double minkowskiResidual = 0.0;
  std::vector<bool> inPredicted;       // per proper chain member V_l: first d_l minimizers inside
};

template <class K>
struct SnapshotSeries {
  int dim = 0;
  std::vector<Rat> lambdaPredicted;            // slopes of the predicted filtration
  std::vector<Subspace<K>> properChain;        // V_1..V_{h-1}
  std::vector<Snapshot> snapshots;
  std::vector<std::optional<Rat>> captureTime; // per proper chain member
};

/// |log omega_d| + d log 2 + log d!, the Minkowski residual bound.
inline double minkowskiBound(int d) {
  static const double pi = 3.14159265358979323846;
  double logBall;  // log volume of the Euclidean unit ball
  switch (d) {
    case 1: logBall = std::log(2.0); break;
    case 2: logBall = std::log(pi); break;
    case 3: logBall = std::log(4.0 * pi / 3.0); break;
    case 4: logBall = std::log(pi * pi / 2.0); break;
    case 5: logBall = std::log(8.0 * pi * pi / 15.0); break;
    case 6: logBall = std::log(pi * pi * pi / 6.0); break;
    case 7: logBall = std::log(16.0 * std::pow(pi, 3) / 105.0); break;
    case 8: logBall = std::log(std::pow(pi, 4) / 24.0); break;
    default: throw std::invalid_argument("minkowskiBound: d <= 8 only");
  }
  double logFact = 0.0;
  for (int k = 2; k <= d; ++k) logFact += std::log(static_cast<double>(k));
  return d * std::log(2.0) + logFact + std::abs(logBall);
}

namespace detail {

/// Working precision for time t: entries span e^{t max|A|}.
template <class K>
mpfr_prec_t workingPrecision(const SimConfig<K>& cfg, const Rat& t) {
  double need = (t * cfg.a.maxAbs()).toDouble() * 1.4426950408889634;  // log2(e)
  long bits = static_cast<long>(std::ceil(need)) + cfg.precisionMarginBits;
  return static_cast<mpfr_prec_t>(std::max(bits, 64L));
}

/// Embeds e^{-Amin t} a_t L as an interval matrix at the given precision.
template <class K>
IMatrix embedScaledBasis(const SimConfig<K>& cfg, const Rat& t, mpfr_prec_t prec) {
  const int d = static_cast<int>(cfg.l.rows());
  Rat amin = cfg.a.weights[0];
  for (const auto& w : cfg.a.weights) amin = std::min(amin, w);
  IMatrix b(d, d, prec);
  int encBits = static_cast<int>(prec) + 4;
  for (int i = 0; i < d; ++i) {
    RInterval rowScale = RInterval::expOfRat((cfg.a.weights[i] - amin) * t, prec);
    for (int j = 0; j < d; ++j) {
      RatInterval encl = FieldTraits<K>::enclosure(cfg.l(i, j), encBits);
      b.at(i, j) = rowScale * RInterval::fromRatInterval(encl, prec);
    }
  }
  return b;
}

}  // namespace detail

/// Simulates a_t L Z^d over the grid: certified successive minima with
/// minimizing integer vectors, per-snapshot Minkowski residual and exact
/// flag-membership tests against the predicted filtration. A snapshot whose
/// enclosures are too wide is retried once at doubled precision.
template <class K>
SnapshotSeries<K> simulate(const SimConfig<K>& cfg, const HNFiltration<K>& predicted) {
  cfg.validate();
  const int d = static_cast<int>(cfg.l.rows());
  if (!predicted.chain.empty() && predicted.chain.back().ambientDim() != d)
    throw std::invalid_argument("simulate: predicted filtration dim mismatch");

  SnapshotSeries<K> series;
  series.dim = d;
  series.properChain = predicted.interior();
  {
    GraysonPolygon poly;
    for (size_t i = 0; i < predicted.chain.size(); ++i)
      poly.vertices.emplace_back(predicted.chain[i].dim(), predicted.values[i]);
    series.lambdaPredicted = slopesToLambda(poly);
  }

  Rat amin = cfg.a.weights[0];
  for (const auto& w : cfg.a.weights) amin = std::min(amin, w);
  K detL = determinant<K>(cfg.l);

  for (const Rat& t : cfg.tGrid) {
    mpfr_prec_t prec = detail::workingPrecision(cfg, t);
    MinimaResult mr;
    for (int attempt = 0;; ++attempt) {
      IMatrix b = detail::embedScaledBasis(cfg, t, prec);
      MinimaOptions opts;
      opts.boundFactor = cfg.enumerationBoundFactor;
      opts.norm = cfg.norm;
      mr = successiveMinima(b, opts);
      if (!mr.precisionFlag || attempt >= 1) break;
      prec *= 2;  // one automatic retry at doubled precision
    }
    if (mr.precisionFlag)
      throw PrecisionError("simulate: enclosures too wide after precision doubling at t=" + t.str());

    Snapshot snap;
    snap.t = t;
    double tD = t.toDouble();
    double scaleBack = (amin * t).toDouble();  // lambda = e^{Amin t} lambda_scaled
    double sumLog = 0.0;
    for (int k = 0; k < d; ++k) {
      RInterval lam = mr.minima[static_cast<size_t>(k)];
      double logLam = 0.5 * std::log(lam.square().midDouble());
      // prefer direct interval log when well-defined
      if (lam.signLo() > 0) logLam = lam.log().midDouble();
      logLam += scaleBack;
      snap.logMinima.push_back(logLam);
      snap.logMinimaOverT.push_back(logLam / tD);
      snap.minima.push_back(std::exp(logLam));
      snap.minimizers.push_back(mr.minimizers[static_cast<size_t>(k)]);
      sumLog += logLam;
    }
    {
      RatInterval dEnc = FieldTraits<K>::enclosure(detL, 64);
      RInterval dI = RInterval::fromRatInterval(dEnc, 96).abs();
      snap.covolLog = (cfg.a.sum() * t).toDouble() + dI.log().midDouble();
      snap.minkowskiResidual = std::abs(sumLog - snap.covolLog);
    }
    for (size_t li = 0; li < series.properChain.size(); ++li) {
      const Subspace<K>& vl = series.properChain[li];
      int dl = vl.dim();
      bool ok = true;
      for (int k = 0; k < dl && ok; ++k) {
        Vector<K> x(d);
        for (int j = 0; j < d; ++j) x(j) = K(Rat(snap.minimizers[static_cast<size_t>(k)](j)));
        ok = vl.contains(x);
      }
      snap.inPredicted.push_back(ok);
    }
    series.snapshots.push_back(std::move(snap));
  }

  // capture time: earliest grid point from which membership holds onward
  series.captureTime.assign(series.properChain.size(), std::nullopt);
  for (size_t li = 0; li < series.properChain.size(); ++li) {
    std::optional<Rat> tStar;
    for (auto it = series.snapshots.rbegin(); it != series.snapshots.rend(); ++it) {
      if (!it->inPredicted[li]) break;
      tStar = it->t;
    }
    series.captureTime[li] = tStar;
  }
  return series;
}

/// Least-squares slope of log lambda_k against t over the last `window`
/// snapshots, per k.
template <class K>
std::vector<double> estimateSlopes(const SnapshotSeries<K>& series, int window) {
  if (window < 2) throw std::invalid_argument("estimateSlopes: window >= 2");
  if (window > static_cast<int>(series.snapshots.size()))
    throw std::invalid_argument("estimateSlopes: window exceeds snapshot count");
  std::vector<double> slopes;
  size_t n0 = series.snapshots.size() - static_cast<size_t>(window);
  for (int k = 0; k < series.dim; ++k) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = n0; i < series.snapshots.size(); ++i) {
      double x = series.snapshots[i].t.toDouble();
      double y = series.snapshots[i].logMinima[static_cast<size_t>(k)];
      sx += x; sy += y; sxx += x * x; sxy += x * y;
    }
    double n = static_cast<double>(window);
    slopes.push_back((n * sxy - sx * sy) / (n * sxx - sx * sx));
  }
  return slopes;
}

/// Residual |sum_k log lambda_k - (t sum A_i + log|det L|)|; must stay below
/// minkowskiBound(d) for every snapshot.
template <class K>
double minkowskiResidual(const Snapshot& snap, const Matrix<K>& l, const Flow& a, const Rat& t) {
  double sumLog = 0.0;
  for (double v : snap.logMinima) sumLog += v;
  K det = determinant<K>(l);
  RInterval dI = RInterval::fromRatInterval(FieldTraits<K>::enclosure(det, 64), 96).abs();
  double covol = (a.sum() * t).toDouble() + dI.log().midDouble();
  return std::abs(sumLog - covol);
}

struct CaptureVerdict {
  int ell = 0;                    // 1-based step index of the filtration
  bool pass = false;
  std::optional<Rat> firstOkT;    // earliest grid point from which the assertion holds
  std::string violation;          // first violation past firstOkT, empty if none
};

/// For each step l of the predicted filtration, asserts the small-vector
/// implication: any recorded minimizer with ||a_t L x|| <= e^{t(Lambda_{d_l}-eps)}
/// lies in V_{l-1}, from some grid point onward.
template <class K>
std::vector<CaptureVerdict> captureReport(const SnapshotSeries<K>& series,
                                          const HNFiltration<K>& predicted, const Rat& eps) {
  if (!(Rat(0) < eps)) throw std::invalid_argument("captureReport: eps > 0 required");
  std::vector<CaptureVerdict> verdicts;
  const int d = series.dim;
  for (int ell = 1; ell <= predicted.steps(); ++ell) {
    const Subspace<K>& vPrev = predicted.chain[static_cast<size_t>(ell - 1)];
    int dEll = predicted.chain[static_cast<size_t>(ell)].dim();
    double lambdaDl = series.lambdaPredicted[static_cast<size_t>(dEll - 1)].toDouble();
    double epsD = eps.toDouble();

    auto holdsAt = [&](const Snapshot& snap, std::string* why) {
      for (int k = 0; k < d; ++k) {
        if (snap.logMinima[static_cast<size_t>(k)] > snap.t.toDouble() * (lambdaDl - epsD))
          continue;
        Vector<K> x(d);
        for (int j = 0; j < d; ++j) x(j) = K(Rat(snap.minimizers[static_cast<size_t>(k)](j)));
        if (!vPrev.contains(x)) {
          if (why)
            *why = "t=" + snap.t.str() + " minimizer k=" + std::to_string(k + 1) +
                   " below threshold but outside V_" + std::to_string(ell - 1);
          return false;
        }
      }
      return true;
    };

    CaptureVerdict v;
    v.ell = ell;
    for (auto it = series.snapshots.rbegin(); it != series.snapshots.rend(); ++it) {
      if (!holdsAt(*it, nullptr)) break;
      v.firstOkT = it->t;
    }
    v.pass = v.firstOkT.has_value();
    if (!v.pass) {
      std::string why;
      holdsAt(series.snapshots.back(), &why);
      v.violation = why;
    }
    verdicts.push_back(std::move(v));
  }
  return verdicts;
}

}  // namespace hnflow
