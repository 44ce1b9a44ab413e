#pragma once

#include <vector>

#include "hnflow/linalg.hpp"

namespace hnflow {

/// A subspace of K^d in canonical form: reduced row-echelon basis rows.
/// Over Q each row is additionally scaled to a primitive integer vector
/// with positive leading entry, so structural equality of the basis is
/// subspace equality. k = 0 rows encodes the zero subspace.
template <class K>
class Subspace {
 public:
  Subspace() : ambient_(0) {}

  static Subspace zero(int ambientDim) {
    Subspace s;
    s.ambient_ = ambientDim;
    s.basis_ = Matrix<K>(0, ambientDim);
    return s;
  }

  static Subspace full(int ambientDim) {
    Matrix<K> id(ambientDim, ambientDim);
    id.setConstant(FieldTraits<K>::zero());
    for (int i = 0; i < ambientDim; ++i) id(i, i) = FieldTraits<K>::one();
    return fromRows(id);
  }

  /// Canonicalizes the row span of `rows` (rows need not be independent).
  static Subspace fromRows(const Matrix<K>& rows) {
    Subspace s;
    s.ambient_ = static_cast<int>(rows.cols());
    RrefResult<K> rr = rref(rows);
    Matrix<K> b(rr.rank, s.ambient_);
    for (int i = 0; i < rr.rank; ++i) b.row(i) = rr.mat.row(i);
    s.basis_ = canonicalizeRows(std::move(b));
    return s;
  }

  static Subspace span(const Vector<K>& v) {
    Matrix<K> m(1, v.size());
    m.row(0) = v.transpose();
    return fromRows(m);
  }

  int ambientDim() const { return ambient_; }
  int dim() const { return static_cast<int>(basis_.rows()); }
  bool isZeroSpace() const { return dim() == 0; }
  bool isFullSpace() const { return dim() == ambient_; }
  const Matrix<K>& basis() const { return basis_; }

  friend bool operator==(const Subspace& a, const Subspace& b) {
    if (a.ambient_ != b.ambient_ || a.dim() != b.dim()) return false;
    for (int i = 0; i < a.dim(); ++i)
      for (int j = 0; j < a.ambient_; ++j)
        if (!(a.basis_(i, j) == b.basis_(i, j))) return false;
    return true;
  }
  friend bool operator!=(const Subspace& a, const Subspace& b) { return !(a == b); }

  /// Arbitrary total order for canonical containers.
  friend bool operator<(const Subspace& a, const Subspace& b) {
    if (a.ambient_ != b.ambient_) return a.ambient_ < b.ambient_;
    if (a.dim() != b.dim()) return a.dim() < b.dim();
    for (int i = 0; i < a.dim(); ++i)
      for (int j = 0; j < a.ambient_; ++j) {
        if (FieldTraits<K>::less(a.basis_(i, j), b.basis_(i, j))) return true;
        if (FieldTraits<K>::less(b.basis_(i, j), a.basis_(i, j))) return false;
      }
    return false;
  }

  bool contains(const Vector<K>& x) const {
    if (static_cast<int>(x.size()) != ambient_) throw std::invalid_argument("contains: dim mismatch");
    bool allZero = true;
    for (int i = 0; i < ambient_; ++i)
      if (!FieldTraits<K>::isZero(x(i))) allZero = false;
    if (allZero) return true;
    if (dim() == 0) return false;
    Matrix<K> stacked(dim() + 1, ambient_);
    stacked.block(0, 0, dim(), ambient_) = basis_;
    stacked.row(dim()) = x.transpose();
    return rank(stacked) == dim();
  }

  bool containsSubspace(const Subspace& other) const {
    if (other.dim() == 0) return true;
    if (other.dim() > dim()) return false;
    Matrix<K> stacked(dim() + other.dim(), ambient_);
    stacked.block(0, 0, dim(), ambient_) = basis_;
    stacked.block(dim(), 0, other.dim(), ambient_) = other.basis_;
    return rank(stacked) == dim();
  }

  /// Z-basis (rows) of W intersect Z^d; requires a rational-valued basis.
  MatZ integralBasis() const;

 private:
  int ambient_;
  Matrix<K> basis_;

  static Matrix<K> canonicalizeRows(Matrix<K> b);
};

template <class K>
Matrix<K> Subspace<K>::canonicalizeRows(Matrix<K> b) {
  // RREF pivots are already 1. Over Q (and for rational-valued rows in a
  // number field, handled per-row), rescale to primitive integer rows.
  for (int i = 0; i < b.rows(); ++i) {
    bool rowRational = true;
    for (int j = 0; j < b.cols(); ++j)
      if (!FieldTraits<K>::isRationalValue(b(i, j))) {
        rowRational = false;
        break;
      }
    if (!rowRational) continue;  // keep monic pivot normalization
    VecZ prim = primitiveRow<K>(b.row(i).transpose());
    for (int j = 0; j < b.cols(); ++j) b(i, j) = K(Rat(prim(j)));
  }
  return b;
}

template <class K>
MatZ Subspace<K>::integralBasis() const {
  if (dim() == 0) return MatZ(0, ambient_);
  MatZ prim(dim(), ambient_);
  for (int i = 0; i < dim(); ++i)
    prim.row(i) = primitiveRow<K>(basis_.row(i).transpose()).transpose();
  // W = {x : N x = 0}, N spanning the orthogonal complement; the integer
  // kernel of N is saturated, i.e. equals W intersect Z^d.
  Matrix<Rat> bq(dim(), ambient_);
  for (int i = 0; i < dim(); ++i)
    for (int j = 0; j < ambient_; ++j) bq(i, j) = Rat(prim(i, j));
  Matrix<Rat> compl_ = kernelBasis<Rat>(bq);  // rows: complement basis
  if (compl_.rows() == 0) {
    // full space
    MatZ id = MatZ::Zero(ambient_, ambient_);
    for (int i = 0; i < ambient_; ++i) id(i, i) = 1;
    return id;
  }
  MatZ n(compl_.rows(), ambient_);
  for (int i = 0; i < compl_.rows(); ++i)
    n.row(i) = primitiveRow<Rat>(compl_.row(i).transpose()).transpose();
  MatZ kerCols = integerKernel(n);  // columns
  return kerCols.transpose();
}

template <class K>
Subspace<K> sumSubspaces(const Subspace<K>& u, const Subspace<K>& v) {
  if (u.ambientDim() != v.ambientDim())
    throw std::invalid_argument("sumSubspaces: ambient dimension mismatch");
  Matrix<K> stacked(u.dim() + v.dim(), u.ambientDim());
  if (u.dim() > 0) stacked.block(0, 0, u.dim(), u.ambientDim()) = u.basis();
  if (v.dim() > 0) stacked.block(u.dim(), 0, v.dim(), v.ambientDim()) = v.basis();
  if (stacked.rows() == 0) return Subspace<K>::zero(u.ambientDim());
  return Subspace<K>::fromRows(stacked);
}

/// Exact intersection via kernels: U cap V = ker([N_U; N_V]) where N_W is
/// a basis of the annihilator of W.
template <class K>
Subspace<K> intersectSubspaces(const Subspace<K>& u, const Subspace<K>& v) {
  if (u.ambientDim() != v.ambientDim())
    throw std::invalid_argument("intersectSubspaces: ambient dimension mismatch");
  const int d = u.ambientDim();
  if (u.dim() == 0 || v.dim() == 0) return Subspace<K>::zero(d);
  Matrix<K> nu = kernelBasis<K>(u.basis());  // rows annihilate U
  Matrix<K> nv = kernelBasis<K>(v.basis());
  Matrix<K> stacked(nu.rows() + nv.rows(), d);
  if (nu.rows() > 0) stacked.block(0, 0, nu.rows(), d) = nu;
  if (nv.rows() > 0) stacked.block(nu.rows(), 0, nv.rows(), d) = nv;
  if (stacked.rows() == 0) return Subspace<K>::full(d);
  Matrix<K> ker = kernelBasis<K>(stacked);
  if (ker.rows() == 0) return Subspace<K>::zero(d);
  return Subspace<K>::fromRows(ker);
}

/// Lexicographically ordered k-subsets of {0..d-1}.
inline std::vector<std::vector<int>> indexSubsets(int d, int k) {
  std::vector<std::vector<int>> out;
  if (k < 0 || k > d) return out;
  std::vector<int> cur(k);
  for (int i = 0; i < k; ++i) cur[i] = i;
  while (true) {
    out.push_back(cur);
    int i = k - 1;
    while (i >= 0 && cur[i] == d - k + i) --i;
    if (i < 0) break;
    ++cur[i];
    for (int j = i + 1; j < k; ++j) cur[j] = cur[j - 1] + 1;
  }
  return out;
}

/// Pluecker coordinates of a k x d matrix of rows (not necessarily
/// canonical): the k x k minor on each lexicographic column subset I.
template <class K>
std::vector<K> wedgeCoordsOfRows(const Matrix<K>& rows) {
  const int k = static_cast<int>(rows.rows());
  const int d = static_cast<int>(rows.cols());
  std::vector<K> out;
  for (const auto& idx : indexSubsets(d, k)) {
    Matrix<K> minor(k, k);
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) minor(i, j) = rows(i, idx[j]);
    out.push_back(determinant<K>(std::move(minor)));
  }
  return out;
}

template <class K>
std::vector<K> wedgeCoords(const Subspace<K>& v) {
  if (v.dim() < 1) throw std::invalid_argument("wedgeCoords: zero subspace");
  return wedgeCoordsOfRows<K>(v.basis());
}

}  // namespace hnflow
