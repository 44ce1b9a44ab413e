#pragma once

#include <algorithm>
#include <functional>
#include <set>
#include <vector>

#include "hnflow/tau.hpp"

namespace hnflow {

/// Finite candidate set of subspaces standing in for the grassmannian.
/// Always contains 0 and the full space; `saturated` means closed under
/// pairwise sum and intersection.
template <class K>
struct CandidateLattice {
  int ambientDim = 0;
  std::vector<Subspace<K>> members;  // sorted by (dim, basis), deterministic
  bool saturated = false;

  bool containsMember(const Subspace<K>& s) const {
    for (const auto& m : members)
      if (m == s) return true;
    return false;
  }
};

/// Closes a generator set under pairwise sums and intersections, adding 0
/// and the full space. Dedekind's free modular lattice on 3 generators is
/// finite but on 4 it is not, hence the round cap; `saturated` is false
/// when the cap stopped the closure.
template <class K>
CandidateLattice<K> closeLattice(const std::vector<Subspace<K>>& generators, int ambientDim,
                                 int maxRounds = 8) {
  std::set<Subspace<K>> s;
  s.insert(Subspace<K>::zero(ambientDim));
  s.insert(Subspace<K>::full(ambientDim));
  for (const auto& g : generators) {
    if (g.ambientDim() != ambientDim)
      throw std::invalid_argument("closeLattice: generator ambient dim mismatch");
    s.insert(g);
  }
  bool saturated = false;
  for (int round = 0; round < maxRounds; ++round) {
    std::vector<Subspace<K>> cur(s.begin(), s.end());
    size_t before = s.size();
    for (size_t i = 0; i < cur.size(); ++i)
      for (size_t j = i + 1; j < cur.size(); ++j) {
        s.insert(sumSubspaces(cur[i], cur[j]));
        s.insert(intersectSubspaces(cur[i], cur[j]));
      }
    if (s.size() == before) {
      saturated = true;
      break;
    }
  }
  CandidateLattice<K> out;
  out.ambientDim = ambientDim;
  out.members.assign(s.begin(), s.end());
  std::sort(out.members.begin(), out.members.end(),
            [](const Subspace<K>& a, const Subspace<K>& b) {
              if (a.dim() != b.dim()) return a.dim() < b.dim();
              return a < b;
            });
  out.saturated = saturated;
  return out;
}

/// Tail flags of L^{-1} in the coordinates sorted by descending weight:
/// { L^{-1} <e_{sigma(i)}, ..., e_{sigma(d)}> : i = 1..d }. For a singleton
/// rational family these generate a lattice containing the true
/// Harder-Narasimhan chain.
template <class K>
std::vector<Subspace<K>> inverseTailFlags(const Matrix<K>& l, const Flow& a) {
  const int d = a.dim();
  Matrix<K> linv = inverse<K>(l);
  std::vector<int> sigma = a.descendingPermutation();
  std::vector<Subspace<K>> flags;
  for (int i = 0; i < d; ++i) {
    // span of e_{sigma(i)}, ..., e_{sigma(d-1)} mapped through L^{-1}
    Matrix<K> rows(d - i, d);
    rows.setConstant(FieldTraits<K>::zero());
    for (int r = 0; r < d - i; ++r) rows(r, sigma[i + r]) = FieldTraits<K>::one();
    flags.push_back(applyMatrix(linv, Subspace<K>::fromRows(rows)));
  }
  return flags;
}

/// Generator recipe for a family: union of inverse tail flags over all
/// samples, plus user-supplied subspaces.
template <class K>
std::vector<Subspace<K>> familyFlagGenerators(const MatrixFamily<K>& fam, const Flow& a,
                                              const std::vector<Subspace<K>>& extra = {}) {
  std::vector<Subspace<K>> gens;
  for (const auto& l : fam.samples) {
    auto flags = inverseTailFlags(l, a);
    gens.insert(gens.end(), flags.begin(), flags.end());
  }
  gens.insert(gens.end(), extra.begin(), extra.end());
  return gens;
}

/// All primitive integer vectors of sup-norm <= height, up to sign
/// (first nonzero entry positive), in lexicographic order.
inline std::vector<VecZ> primitiveVectors(int d, int height) {
  std::vector<VecZ> out;
  VecZ cur(d);
  // iterate all vectors in [-h..h]^d whose first nonzero entry is positive
  std::function<void(int, bool)> rec = [&](int pos, bool leadingZero) {
    if (pos == d) {
      if (leadingZero) return;  // zero vector
      Int g(0);
      for (int i = 0; i < d; ++i) {
        Int a;
        mpz_abs(a.get_mpz_t(), cur(i).get_mpz_t());
        Int gg;
        mpz_gcd(gg.get_mpz_t(), g.get_mpz_t(), a.get_mpz_t());
        g = gg;
      }
      if (g == 1) out.push_back(cur);
      return;
    }
    int lo = leadingZero ? 0 : -height;
    for (int v = lo; v <= height; ++v) {
      cur(pos) = v;
      rec(pos + 1, leadingZero && v == 0);
    }
  };
  rec(0, true);
  return out;
}

/// All rational subspaces of every dimension 1..d-1 admitting a primitive
/// integer basis with entries of magnitude <= height (d <= 3 guard).
template <class K>
std::vector<Subspace<K>> heightBoundedSubspaces(int d, int height) {
  if (d > 3) throw std::invalid_argument("heightBoundedSubspaces: only d <= 3 supported");
  std::vector<Subspace<K>> out;
  std::set<Subspace<K>> seen;
  auto prims = primitiveVectors(d, height);
  auto add = [&](const Subspace<K>& s) {
    if (seen.insert(s).second) out.push_back(s);
  };
  for (const auto& v : prims) {
    Matrix<K> row(1, d);
    for (int j = 0; j < d; ++j) row(0, j) = K(Rat(v(j)));
    add(Subspace<K>::fromRows(row));
  }
  if (d == 3) {
    for (size_t i = 0; i < prims.size(); ++i)
      for (size_t j = i + 1; j < prims.size(); ++j) {
        Matrix<K> rows(2, d);
        for (int c = 0; c < d; ++c) {
          rows(0, c) = K(Rat(prims[i](c)));
          rows(1, c) = K(Rat(prims[j](c)));
        }
        Subspace<K> s = Subspace<K>::fromRows(rows);
        if (s.dim() == 2) add(s);
      }
  }
  return out;
}

}  // namespace hnflow
