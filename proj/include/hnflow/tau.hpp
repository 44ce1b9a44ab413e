#pragma once

#include <string>
#include <vector>

#include "hnflow/flow.hpp"
#include "hnflow/subspace.hpp"

namespace hnflow {

/// Finite stand-in for the matrix family M: a nonempty list of invertible
/// d x d samples over one field context.
template <class K>
struct MatrixFamily {
  int dim = 0;
  std::vector<Matrix<K>> samples;
  std::string label;

  MatrixFamily() = default;
  MatrixFamily(std::vector<Matrix<K>> s, std::string lbl = "") : samples(std::move(s)), label(std::move(lbl)) {
    if (samples.empty()) throw std::invalid_argument("MatrixFamily: need at least one sample");
    dim = static_cast<int>(samples.front().rows());
    for (const auto& m : samples) {
      if (m.rows() != dim || m.cols() != dim)
        throw std::invalid_argument("MatrixFamily: inconsistent sample shape");
      if (FieldTraits<K>::isZero(determinant<K>(m)))
        throw std::invalid_argument("MatrixFamily: singular sample");
    }
  }

  static MatrixFamily singleton(Matrix<K> m, std::string lbl = "") {
    std::vector<Matrix<K>> v;
    v.push_back(std::move(m));
    return MatrixFamily(std::move(v), std::move(lbl));
  }
};

/// Image subspace L V (rows of V's basis mapped through L).
template <class K>
Subspace<K> applyMatrix(const Matrix<K>& l, const Subspace<K>& v) {
  if (v.dim() == 0) return Subspace<K>::zero(v.ambientDim());
  Matrix<K> rows = v.basis() * l.transpose();
  return Subspace<K>::fromRows(rows);
}

/// Expansion rate of L V under the flow: max over index sets I with a
/// nonvanishing Pluecker coordinate of sum_{i in I} A_i. tau(0) = 0.
template <class K>
Rat tauSingle(const Matrix<K>& l, const Subspace<K>& v, const Flow& a) {
  if (v.dim() == 0) return Rat(0);
  if (a.dim() != v.ambientDim()) throw std::invalid_argument("tauSingle: flow/subspace dim mismatch");
  Subspace<K> w = applyMatrix(l, v);
  std::vector<K> coords = wedgeCoords(w);
  auto subsets = indexSubsets(a.dim(), w.dim());
  bool found = false;
  Rat best(0);
  for (size_t s = 0; s < subsets.size(); ++s) {
    if (FieldTraits<K>::isZero(coords[s])) continue;
    Rat val(0);
    for (int i : subsets[s]) val += a.weights[i];
    if (!found || best < val) best = val;
    found = true;
  }
  if (!found) throw std::logic_error("tauSingle: all wedge coordinates vanished");
  return best;
}

/// Same value through the pivot formula: with weights sorted descending and
/// coordinates permuted accordingly, tau = sum of A_i over the indices where
/// dim(W cap F_i) drops, F_i = <e_i, ..., e_d>.
template <class K>
Rat tauPivot(const Matrix<K>& l, const Subspace<K>& v, const Flow& a) {
  if (v.dim() == 0) return Rat(0);
  const int d = a.dim();
  Subspace<K> w = applyMatrix(l, v);
  std::vector<int> sigma = a.descendingPermutation();
  // permuted coordinates: row j of the permuted basis is old coordinate sigma[j]
  Matrix<K> pb(w.dim(), d);
  for (int i = 0; i < w.dim(); ++i)
    for (int j = 0; j < d; ++j) pb(i, j) = w.basis()(i, sigma[j]);

  // dims[i] = dim(W cap F_{i}) for i = 1..d+1 (1-based tails), F_{d+1} = 0
  std::vector<int> dims(d + 2, 0);
  for (int i = 1; i <= d; ++i) {
    // rank of [W; F_i] where F_i has d-i+1 tail coordinate rows
    int tail = d - i + 1;
    Matrix<K> stacked(w.dim() + tail, d);
    stacked.setConstant(FieldTraits<K>::zero());
    stacked.block(0, 0, w.dim(), d) = pb;
    for (int r = 0; r < tail; ++r) stacked(w.dim() + r, i - 1 + r) = FieldTraits<K>::one();
    int rk = rank(stacked);
    dims[i] = w.dim() + tail - rk;
  }
  Rat tau(0);
  for (int i = 1; i <= d; ++i)
    if (dims[i] > dims[i + 1]) tau += a.weights[sigma[i - 1]];
  return tau;
}

template <class K>
Rat tauFamily(const MatrixFamily<K>& fam, const Subspace<K>& v, const Flow& a) {
  if (v.dim() == 0) return Rat(0);
  bool first = true;
  Rat best(0);
  for (const auto& l : fam.samples) {
    Rat t = tauSingle(l, v, a);
    if (first || best < t) best = t;
    first = false;
  }
  return best;
}

}  // namespace hnflow
