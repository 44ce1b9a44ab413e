#pragma once

#include <utility>
#include <vector>

#include "hnflow/eigen_support.hpp"
#include "hnflow/field_traits.hpp"

namespace hnflow {

/// Result of exact Gauss-Jordan elimination.
template <class K>
struct RrefResult {
  Matrix<K> mat;
  int rank = 0;
  std::vector<int> pivots;  // pivot column per pivot row
};

/// Reduced row-echelon form over an exact field. Pivots are the first
/// nonzero entry in each column scan; pivot entries normalized to 1.
template <class K>
RrefResult<K> rref(Matrix<K> m) {
  using FT = FieldTraits<K>;
  const int rows = static_cast<int>(m.rows());
  const int cols = static_cast<int>(m.cols());
  RrefResult<K> out;
  int row = 0;
  for (int col = 0; col < cols && row < rows; ++col) {
    int piv = -1;
    for (int r = row; r < rows; ++r)
      if (!FT::isZero(m(r, col))) {
        piv = r;
        break;
      }
    if (piv < 0) continue;
    if (piv != row) m.row(piv).swap(m.row(row));
    K inv = FT::one() / m(row, col);
    for (int c = col; c < cols; ++c) m(row, c) = m(row, c) * inv;
    m(row, col) = FT::one();  // kill residue from the division
    for (int r = 0; r < rows; ++r) {
      if (r == row || FT::isZero(m(r, col))) continue;
      K f = m(r, col);
      for (int c = col; c < cols; ++c) m(r, c) = m(r, c) - f * m(row, c);
      m(r, col) = FT::zero();
    }
    out.pivots.push_back(col);
    ++row;
  }
  out.rank = row;
  out.mat = std::move(m);
  return out;
}

template <class K>
int rank(const Matrix<K>& m) {
  return rref(m).rank;
}

/// Basis of {x : m x = 0}, returned as rows (possibly 0 rows).
template <class K>
Matrix<K> kernelBasis(const Matrix<K>& m) {
  using FT = FieldTraits<K>;
  const int cols = static_cast<int>(m.cols());
  RrefResult<K> rr = rref(m);
  std::vector<bool> isPivot(cols, false);
  for (int p : rr.pivots) isPivot[p] = true;
  int nfree = cols - rr.rank;
  Matrix<K> ker(nfree, cols);
  ker.setConstant(FT::zero());
  int kRow = 0;
  for (int c = 0; c < cols; ++c) {
    if (isPivot[c]) continue;
    ker(kRow, c) = FT::one();
    for (int pr = 0; pr < rr.rank; ++pr) {
      int pc = rr.pivots[pr];
      ker(kRow, pc) = -rr.mat(pr, c);
    }
    ++kRow;
  }
  return ker;
}

template <class K>
K determinant(Matrix<K> m) {
  using FT = FieldTraits<K>;
  const int n = static_cast<int>(m.rows());
  if (n != m.cols()) throw std::invalid_argument("determinant: square matrix required");
  K det = FT::one();
  for (int col = 0; col < n; ++col) {
    int piv = -1;
    for (int r = col; r < n; ++r)
      if (!FT::isZero(m(r, col))) {
        piv = r;
        break;
      }
    if (piv < 0) return FT::zero();
    if (piv != col) {
      m.row(piv).swap(m.row(col));
      det = -det;
    }
    det = det * m(col, col);
    K inv = FT::one() / m(col, col);
    for (int r = col + 1; r < n; ++r) {
      if (FT::isZero(m(r, col))) continue;
      K f = m(r, col) * inv;
      for (int c = col; c < n; ++c) m(r, c) = m(r, c) - f * m(col, c);
    }
  }
  return det;
}

/// Solves A x = b for square invertible A.
template <class K>
Vector<K> solve(const Matrix<K>& a, const Vector<K>& b) {
  const int n = static_cast<int>(a.rows());
  Matrix<K> aug(n, n + 1);
  aug.block(0, 0, n, n) = a;
  for (int i = 0; i < n; ++i) aug(i, n) = b(i);
  RrefResult<K> rr = rref(std::move(aug));
  if (rr.rank != n) throw std::domain_error("solve: singular matrix");
  Vector<K> x(n);
  for (int i = 0; i < n; ++i) x(i) = rr.mat(i, n);
  return x;
}

template <class K>
Matrix<K> inverse(const Matrix<K>& a) {
  using FT = FieldTraits<K>;
  const int n = static_cast<int>(a.rows());
  Matrix<K> aug(n, 2 * n);
  aug.setConstant(FT::zero());
  aug.block(0, 0, n, n) = a;
  for (int i = 0; i < n; ++i) aug(i, n + i) = FT::one();
  RrefResult<K> rr = rref(std::move(aug));
  if (rr.rank != n) throw std::domain_error("inverse: singular matrix");
  return rr.mat.block(0, n, n, n);
}

/// Clears denominators and common content; first nonzero entry positive.
/// Input must be a rational-valued row.
template <class K>
VecZ primitiveRow(const Vector<K>& row) {
  using FT = FieldTraits<K>;
  const int n = static_cast<int>(row.size());
  Int lcm(1);
  for (int i = 0; i < n; ++i) {
    Rat q = FT::rationalValue(row(i));
    Int d = q.den(), g;
    mpz_gcd(g.get_mpz_t(), lcm.get_mpz_t(), d.get_mpz_t());
    lcm = lcm / g * d;
  }
  VecZ out(n);
  Int content(0);
  for (int i = 0; i < n; ++i) {
    out(i) = (FT::rationalValue(row(i)) * Rat(lcm)).num();
    Int g;
    mpz_gcd(g.get_mpz_t(), content.get_mpz_t(), out(i).get_mpz_t());
    content = g;
  }
  if (content > 1)
    for (int i = 0; i < n; ++i) out(i) /= content;
  for (int i = 0; i < n; ++i) {
    if (out(i) == 0) continue;
    if (out(i) < 0)
      for (int j = 0; j < n; ++j) out(j) = -out(j);
    break;
  }
  return out;
}

/// Z-basis of {x in Z^d : C x = 0} for an integer matrix C, as columns.
/// Unimodular column elimination; the result is a saturated sublattice.
inline MatZ integerKernel(MatZ c) {
  const int rows = static_cast<int>(c.rows());
  const int d = static_cast<int>(c.cols());
  MatZ v = MatZ::Zero(d, d);
  for (int i = 0; i < d; ++i) v(i, i) = 1;
  int lead = 0;
  for (int i = 0; i < rows && lead < d; ++i) {
    // reduce row i over columns >= lead to a single nonzero via gcd steps
    while (true) {
      int j1 = -1, j2 = -1;
      for (int j = lead; j < d; ++j) {
        if (c(i, j) == 0) continue;
        if (j1 < 0) {
          j1 = j;
        } else {
          j2 = j;
          break;
        }
      }
      if (j2 < 0) {
        if (j1 >= 0) {
          if (j1 != lead) {
            c.col(j1).swap(c.col(lead));
            v.col(j1).swap(v.col(lead));
          }
          ++lead;
        }
        break;
      }
      Int a1, a2;
      mpz_abs(a1.get_mpz_t(), c(i, j1).get_mpz_t());
      mpz_abs(a2.get_mpz_t(), c(i, j2).get_mpz_t());
      if (a2 < a1) std::swap(j1, j2);
      // round-to-nearest quotient keeps entries small
      Int num = c(i, j2), den = c(i, j1);
      Int absDen = den < 0 ? Int(-den) : den;
      Int twice = 2 * num;
      if (num >= 0)
        twice += absDen;
      else
        twice -= absDen;
      Int den2 = 2 * den, q;
      mpz_tdiv_q(q.get_mpz_t(), twice.get_mpz_t(), den2.get_mpz_t());
      if (q == 0) q = (num > 0) == (den > 0) ? 1 : -1;
      for (int r = 0; r < rows; ++r) c(r, j2) -= q * c(r, j1);
      for (int r = 0; r < d; ++r) v(r, j2) -= q * v(r, j1);
    }
  }
  return v.block(0, lead, d, d - lead);
}

}  // namespace hnflow
