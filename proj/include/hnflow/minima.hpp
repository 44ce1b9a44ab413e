#pragma once

#include <vector>

#include "hnflow/eigen_support.hpp"
#include "hnflow/interval.hpp"

namespace hnflow {

/// Interval matrix, column-major meaning: column j is the j-th basis vector.
struct IMatrix {
  int rows = 0, cols = 0;
  std::vector<RInterval> a;

  IMatrix() = default;
  IMatrix(int r, int c, mpfr_prec_t prec) : rows(r), cols(c), a(static_cast<size_t>(r) * c, RInterval(prec)) {}
  RInterval& at(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
  const RInterval& at(int i, int j) const { return a[static_cast<size_t>(i) * cols + j]; }
};

/// Exact-integer LLL (delta = 99/100) on the columns of m.
/// Returns the reduced basis r and the unimodular transform u with r = m u.
void lllReduce(const MatZ& m, MatZ& r, MatZ& u);

enum class NormKind { Euclidean, Sup };

struct MinimaOptions {
  Rat boundFactor = Rat(6, 5);   // enumeration radius = lambda_d candidate * factor
  long candidateCap = 500000;    // Fincke-Pohst safety cap
  double relWidthFlag = 1e-6;    // precision flag threshold on the enclosures
  NormKind norm = NormKind::Euclidean;
};

struct MinimaResult {
  std::vector<RInterval> minima;   // lambda_1 <= ... <= lambda_d (certified enclosures)
  std::vector<VecZ> minimizers;    // integer coefficients w.r.t. the input columns
  bool precisionFlag = false;
};

/// Certified Euclidean successive minima of the lattice spanned by the
/// columns of b: exact integer LLL on the scaled midpoint basis, complete
/// Fincke-Pohst enumeration within radius lambda_d-candidate * boundFactor
/// (exact rational arithmetic), and interval certification of every
/// candidate norm against the true interval basis.
MinimaResult successiveMinima(const IMatrix& b, const MinimaOptions& opts = {});

/// Exhaustive coefficient-box oracle: all nonzero c with |c_i| <= box.
/// Independent of the LLL/enumeration path; used as the test oracle.
MinimaResult minimaByBox(const IMatrix& b, long box);

}  // namespace hnflow
