#include "hnflow/minima.hpp"

#include <algorithm>
#include <functional>
#include <set>

#include "hnflow/linalg.hpp"

namespace hnflow {

namespace {

using Gram = std::vector<std::vector<Rat>>;

Rat dotColumns(const MatZ& m, int i, int j) {
  Int acc(0);
  for (int r = 0; r < m.rows(); ++r) acc += m(r, i) * m(r, j);
  return Rat(acc);
}

Gram gramOfIntCols(const MatZ& m) {
  const int n = static_cast<int>(m.cols());
  Gram g(n, std::vector<Rat>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j) g[i][j] = g[j][i] = dotColumns(m, i, j);
  return g;
}

Gram conjugate(const Gram& g, const MatZ& u) {
  const int n = static_cast<int>(g.size());
  const int m = static_cast<int>(u.cols());
  Gram out(m, std::vector<Rat>(m, Rat(0)));
  for (int a = 0; a < m; ++a)
    for (int b = 0; b <= a; ++b) {
      Rat acc(0);
      for (int i = 0; i < n; ++i) {
        if (u(i, a) == 0) continue;
        Rat partial(0);
        for (int j = 0; j < n; ++j) {
          if (u(j, b) == 0) continue;
          partial += g[i][j] * Rat(u(j, b));
        }
        acc += Rat(u(i, a)) * partial;
      }
      out[a][b] = out[b][a] = acc;
    }
  return out;
}

struct GSDecomp {
  std::vector<std::vector<Rat>> mu;  // mu[i][j] for i > j
  std::vector<Rat> diag;             // D_j > 0
};

GSDecomp gsDecompose(const Gram& g) {
  const int n = static_cast<int>(g.size());
  GSDecomp gs;
  gs.mu.assign(n, std::vector<Rat>(n, Rat(0)));
  gs.diag.assign(n, Rat(0));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < i; ++j) {
      Rat num = g[i][j];
      for (int k = 0; k < j; ++k) num -= gs.mu[i][k] * gs.mu[j][k] * gs.diag[k];
      gs.mu[i][j] = num / gs.diag[j];
    }
    Rat nrm = g[i][i];
    for (int k = 0; k < i; ++k) nrm -= gs.mu[i][k] * gs.mu[i][k] * gs.diag[k];
    gs.diag[i] = nrm;
    if (!(Rat(0) < gs.diag[i])) throw PrecisionError("minima: Gram not positive definite");
  }
  return gs;
}

/// LLL (delta = 99/100) on an abstract lattice given by a rational Gram.
/// Column operations are tracked in u; the reduced Gram is u^T g u.
void lllGram(const Gram& g0, MatZ& u) {
  const int n = static_cast<int>(g0.size());
  u = MatZ::Zero(n, n);
  for (int i = 0; i < n; ++i) u(i, i) = 1;
  if (n <= 1) return;
  const Rat delta(99, 100);
  long iters = 0;
  while (true) {
    if (++iters > 100000) throw PrecisionError("lllGram: iteration cap exceeded");
    Gram g = conjugate(g0, u);
    GSDecomp gs = gsDecompose(g);
    // size-reduce everything
    bool changed = false;
    for (int k = 1; k < n; ++k)
      for (int j = k - 1; j >= 0; --j) {
        Int q = gs.mu[k][j].roundNearest();
        if (q == 0) continue;
        for (int r = 0; r < n; ++r) u(r, k) -= q * u(r, j);
        changed = true;
      }
    if (changed) {
      g = conjugate(g0, u);
      gs = gsDecompose(g);
    }
    int swapAt = -1;
    for (int k = 1; k < n; ++k) {
      Rat lhs = gs.diag[k];
      Rat rhs = (delta - gs.mu[k][k - 1] * gs.mu[k][k - 1]) * gs.diag[k - 1];
      if (lhs < rhs) {
        swapAt = k;
        break;
      }
    }
    if (swapAt < 0) return;
    for (int r = 0; r < n; ++r) std::swap(u(r, swapAt), u(r, swapAt - 1));
  }
}

using VisitFn = std::function<void(const std::vector<Int>&, const Rat&)>;

struct QFEnum {
  const GSDecomp* gs;
  const std::vector<Rat>* theta;  // per-level real shift (nullable)
  bool skipZero = true;
  Rat radius2;  // may shrink via visitor
  long cap = 500000;
  long visited = 0;
  std::vector<Int> c;
  VisitFn visit;

  void run() {
    c.assign(gs->diag.size(), Int(0));
    level(static_cast<int>(gs->diag.size()) - 1, Rat(0));
  }

  // partial = contribution of levels above `lev`
  void level(int lev, const Rat& partial) {
    if (lev < 0) {
      bool allZero = true;
      for (const auto& v : c)
        if (v != 0) allZero = false;
      if (allZero && skipZero) return;
      if (++visited > cap) throw PrecisionError("minima: enumeration cap exceeded");
      visit(c, partial);
      return;
    }
    Rat center(0);
    for (size_t i = static_cast<size_t>(lev) + 1; i < c.size(); ++i)
      center += gs->mu[i][static_cast<size_t>(lev)] * Rat(c[i]);
    center = -center;
    if (theta) center += (*theta)[static_cast<size_t>(lev)];
    Int base = center.roundNearest();
    for (int dir = 0; dir < 2; ++dir) {
      for (long step = dir;; ++step) {
        Int cj = dir == 0 ? Int(base + step) : Int(base - step);
        Rat delta = Rat(cj) - center;
        Rat contrib = gs->diag[static_cast<size_t>(lev)] * delta * delta;
        Rat total = partial + contrib;
        if (total > radius2) {
          if (step == dir) {
            if (dir == 0) return;  // even the center is out
            break;
          }
          break;
        }
        c[static_cast<size_t>(lev)] = cj;
        level(lev - 1, total);
        c[static_cast<size_t>(lev)] = 0;
      }
    }
  }
};

bool lexLessVec(const std::vector<Int>& a, const std::vector<Int>& b) {
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i] < b[i]) return true;
    if (b[i] < a[i]) return false;
  }
  return false;
}

/// Shortest nonzero vector of the lattice with Gram g (exact). Returns the
/// coefficient vector and its squared norm.
std::pair<std::vector<Int>, Rat> shortestVector(const Gram& g, const Rat& inflate) {
  const int n = static_cast<int>(g.size());
  MatZ u;
  lllGram(g, u);
  Gram gr = conjugate(g, u);
  GSDecomp gs = gsDecompose(gr);
  Rat best = gr[0][0];
  for (int j = 1; j < n; ++j) best = std::min(best, gr[j][j]);
  std::vector<Int> bestC;  // in reduced coords
  QFEnum en;
  en.gs = &gs;
  en.theta = nullptr;
  en.skipZero = true;
  en.radius2 = best * inflate;
  en.visit = [&](const std::vector<Int>& c, const Rat& n2) {
    if (bestC.empty() || n2 < best || (n2 == best && lexLessVec(c, bestC))) {
      best = n2;
      bestC = c;
      en.radius2 = n2;
    }
  };
  en.run();
  if (bestC.empty()) throw PrecisionError("minima: shortest vector search found nothing");
  std::vector<Int> out(static_cast<size_t>(n), Int(0));
  for (int i = 0; i < n; ++i) {
    Int acc(0);
    for (int j = 0; j < n; ++j) acc += u(i, j) * bestC[static_cast<size_t>(j)];
    out[static_cast<size_t>(i)] = acc;
  }
  return {out, best};
}

/// Exact CVP: minimizes (x0 + S w)^T G0 (x0 + S w) over integer w, where the
/// (k x k) Gram gs = S^T G0 S is given LLL-reduced via uS, and lin = S^T G0 x0.
/// Returns (w, minimal value); x0norm2 = x0^T G0 x0.
std::pair<std::vector<Int>, Rat> closestVector(const Gram& gs, const MatZ& uS,
                                               const std::vector<Rat>& lin, const Rat& x0norm2) {
  const int k = static_cast<int>(gs.size());
  // in reduced coordinates w = uS v: value = x0n2 + 2 linR.v + v^T gR v
  Gram gr = conjugate(gs, uS);
  std::vector<Rat> linR(static_cast<size_t>(k), Rat(0));
  for (int a = 0; a < k; ++a) {
    Rat acc(0);
    for (int i = 0; i < k; ++i) acc += Rat(uS(i, a)) * lin[static_cast<size_t>(i)];
    linR[static_cast<size_t>(a)] = acc;
  }
  GSDecomp gsd = gsDecompose(gr);
  // real minimizer v* solves gr v = -linR
  MatQ a(k, k);
  VecQ b(k);
  for (int i = 0; i < k; ++i) {
    b(i) = -linR[static_cast<size_t>(i)];
    for (int j = 0; j < k; ++j) a(i, j) = gr[static_cast<size_t>(i)][static_cast<size_t>(j)];
  }
  VecQ vstar = solve<Rat>(a, b);
  // theta in GS coordinates: the form is sum D_j (v_j - theta_j + sum mu_ij v_i)^2 + vmin
  // with theta_j = vstar_j + sum_{i>j} mu_ij vstar_i.
  std::vector<Rat> theta(static_cast<size_t>(k), Rat(0));
  for (int j = 0; j < k; ++j) {
    Rat t = vstar(j);
    for (int i = j + 1; i < k; ++i) t += gsd.mu[static_cast<size_t>(i)][static_cast<size_t>(j)] * vstar(i);
    theta[static_cast<size_t>(j)] = t;
  }
  Rat vmin = x0norm2;
  for (int i = 0; i < k; ++i) vmin += linR[static_cast<size_t>(i)] * vstar(i);
  // Babai rounding gives the starting radius
  std::vector<Int> vb(static_cast<size_t>(k), Int(0));
  for (int j = k - 1; j >= 0; --j) {
    Rat t = theta[static_cast<size_t>(j)];
    for (int i = j + 1; i < k; ++i) t -= gsd.mu[static_cast<size_t>(i)][static_cast<size_t>(j)] * Rat(vb[static_cast<size_t>(i)]);
    vb[static_cast<size_t>(j)] = t.roundNearest();
  }
  // shifted form value (v - v*)^T gr (v - v*)
  auto quadAt = [&](const std::vector<Int>& v) {
    Rat val(0);
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j)
        val += (Rat(v[static_cast<size_t>(i)]) - vstar(i)) *
               gr[static_cast<size_t>(i)][static_cast<size_t>(j)] *
               (Rat(v[static_cast<size_t>(j)]) - vstar(j));
    return val;
  };
  Rat bestShift = quadAt(vb);
  std::vector<Int> bestV = vb;
  QFEnum en;
  en.gs = &gsd;
  en.theta = &theta;
  en.skipZero = false;
  en.radius2 = bestShift;
  en.visit = [&](const std::vector<Int>& v, const Rat& shifted) {
    if (shifted < bestShift || (shifted == bestShift && lexLessVec(v, bestV))) {
      bestShift = shifted;
      bestV = v;
      en.radius2 = shifted;
    }
  };
  en.run();
  // back to original S coordinates
  std::vector<Int> w(static_cast<size_t>(k), Int(0));
  for (int i = 0; i < k; ++i) {
    Int acc(0);
    for (int j = 0; j < k; ++j) acc += uS(i, j) * bestV[static_cast<size_t>(j)];
    w[static_cast<size_t>(i)] = acc;
  }
  return {w, vmin + bestShift};
}

/// Column reduction with transform: returns unimodular v and the count of
/// independent columns r such that (c v) has its r independent columns first.
struct ColReduce {
  MatZ v;
  int rank = 0;
};

ColReduce columnReduceWithTransform(MatZ c) {
  const int rows = static_cast<int>(c.rows());
  const int d = static_cast<int>(c.cols());
  ColReduce out;
  out.v = MatZ::Zero(d, d);
  for (int i = 0; i < d; ++i) out.v(i, i) = 1;
  int lead = 0;
  for (int i = 0; i < rows && lead < d; ++i) {
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
            out.v.col(j1).swap(out.v.col(lead));
          }
          ++lead;
        }
        break;
      }
      Int a1, a2;
      mpz_abs(a1.get_mpz_t(), c(i, j1).get_mpz_t());
      mpz_abs(a2.get_mpz_t(), c(i, j2).get_mpz_t());
      if (a2 < a1) std::swap(j1, j2);
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
      for (int r = 0; r < d; ++r) out.v(r, j2) -= q * out.v(r, j1);
    }
  }
  out.rank = lead;
  return out;
}

/// Greedy exact successive minima of the integer lattice with Gram g0
/// (= M^T M for the scaled basis M). Returns coefficient vectors in Z^d.
std::vector<VecZ> exactSuccessiveMinima(const Gram& g0, const Rat& inflate, long /*cap*/) {
  const int d = static_cast<int>(g0.size());
  std::vector<VecZ> xs;

  // lambda_1
  {
    auto [c, n2] = shortestVector(g0, inflate);
    VecZ x(d);
    for (int i = 0; i < d; ++i) x(i) = c[static_cast<size_t>(i)];
    xs.push_back(x);
  }

  for (int k = 2; k <= d; ++k) {
    // saturated coefficient lattice S of span(x_1..x_{k-1})
    MatQ rowsQ(k - 1, d);
    for (int i = 0; i < k - 1; ++i)
      for (int j = 0; j < d; ++j) rowsQ(i, j) = Rat(xs[static_cast<size_t>(i)](j));
    MatQ ann = kernelBasis<Rat>(rowsQ);  // rows annihilate the span
    MatZ n(ann.rows(), d);
    for (int i = 0; i < ann.rows(); ++i)
      n.row(i) = primitiveRow<Rat>(ann.row(i).transpose()).transpose();
    MatZ s = integerKernel(n);  // d x (k-1), saturated
    // quotient map: phi(x) = n x; image basis via column reduction of n
    ColReduce cr = columnReduceWithTransform(n);
    const int m = d - (k - 1);
    if (cr.rank != m) throw PrecisionError("minima: quotient rank mismatch");
    MatZ t(d, m);
    for (int j = 0; j < m; ++j) t.col(j) = cr.v.col(j);

    // Gram of the projection of t's columns orthogonally off span(S)
    Gram gS = conjugate(g0, s);
    MatZ uS;
    lllGram(gS, uS);
    // cross terms: crossTS[a][b] = t_a^T G0 s_b ; solve for projection
    const int ks = k - 1;
    MatQ gSq(ks, ks);
    for (int i = 0; i < ks; ++i)
      for (int j = 0; j < ks; ++j) gSq(i, j) = gS[static_cast<size_t>(i)][static_cast<size_t>(j)];
    auto g0Mul = [&](const MatZ& a, const MatZ& b) {
      // a^T G0 b as rational matrix
      MatQ out(a.cols(), b.cols());
      for (int i = 0; i < a.cols(); ++i)
        for (int j = 0; j < b.cols(); ++j) {
          Rat acc(0);
          for (int r = 0; r < d; ++r) {
            if (a(r, i) == 0) continue;
            Rat partial(0);
            for (int c2 = 0; c2 < d; ++c2) {
              if (b(c2, j) == 0) continue;
              partial += g0[static_cast<size_t>(r)][static_cast<size_t>(c2)] * Rat(b(c2, j));
            }
            acc += Rat(a(r, i)) * partial;
          }
          out(i, j) = acc;
        }
      return out;
    };
    MatQ gTT = g0Mul(t, t);
    MatQ gTS = g0Mul(t, s);
    MatQ gSinv = inverse<Rat>(gSq);
    MatQ gPerp = gTT - gTS * gSinv * gTS.transpose();
    Gram gq(static_cast<size_t>(m), std::vector<Rat>(static_cast<size_t>(m)));
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) gq[static_cast<size_t>(i)][static_cast<size_t>(j)] = gPerp(i, j);

    // lift cost for a quotient coefficient vector a (w.r.t. t's columns)
    auto liftOf = [&](const std::vector<Int>& a) {
      VecZ x0(d);
      for (int i = 0; i < d; ++i) {
        Int acc(0);
        for (int j = 0; j < m; ++j) acc += t(i, j) * a[static_cast<size_t>(j)];
        x0(i) = acc;
      }
      std::vector<Rat> lin(static_cast<size_t>(ks), Rat(0));
      for (int i = 0; i < ks; ++i) {
        Rat acc(0);
        for (int r = 0; r < d; ++r) {
          if (s(r, i) == 0) continue;
          Rat partial(0);
          for (int c2 = 0; c2 < d; ++c2) {
            if (x0(c2) == 0) continue;
            partial += g0[static_cast<size_t>(r)][static_cast<size_t>(c2)] * Rat(x0(c2));
          }
          acc += Rat(s(r, i)) * partial;
        }
        lin[static_cast<size_t>(i)] = acc;
      }
      Rat x0n2(0);
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
          x0n2 += Rat(x0(i)) * g0[static_cast<size_t>(i)][static_cast<size_t>(j)] * Rat(x0(j));
      auto [w, total] = closestVector(gS, uS, lin, x0n2);
      VecZ x = x0;
      for (int i = 0; i < d; ++i) {
        Int acc(0);
        for (int j = 0; j < ks; ++j) acc += s(i, j) * w[static_cast<size_t>(j)];
        x(i) += acc;
      }
      return std::make_pair(x, total);
    };

    // reduce the quotient lattice, initialize with its shortest column lift
    MatZ uq;
    lllGram(gq, uq);
    Gram gqr = conjugate(gq, uq);
    GSDecomp gsq = gsDecompose(gqr);

    Rat bestTotal(0);
    VecZ bestX(d);
    bool haveBest = false;
    // seed with each reduced quotient basis vector
    for (int j = 0; j < m; ++j) {
      std::vector<Int> a(static_cast<size_t>(m), Int(0));
      for (int i = 0; i < m; ++i) a[static_cast<size_t>(i)] = uq(i, j);
      auto [x, total] = liftOf(a);
      if (!haveBest || total < bestTotal) {
        bestTotal = total;
        bestX = x;
        haveBest = true;
      }
    }

    QFEnum en;
    en.gs = &gsq;
    en.theta = nullptr;
    en.skipZero = true;
    en.radius2 = bestTotal * inflate;
    en.visit = [&](const std::vector<Int>& cRed, const Rat& /*pn2*/) {
      // map reduced coords to t-coords
      std::vector<Int> a(static_cast<size_t>(m), Int(0));
      for (int i = 0; i < m; ++i) {
        Int acc(0);
        for (int j = 0; j < m; ++j) acc += uq(i, j) * cRed[static_cast<size_t>(j)];
        a[static_cast<size_t>(i)] = acc;
      }
      auto [x, total] = liftOf(a);
      if (total < bestTotal) {
        bestTotal = total;
        bestX = x;
        en.radius2 = std::min(en.radius2, total);
      }
    };
    en.run();
    xs.push_back(bestX);
  }
  return xs;
}

/// Squared Euclidean norm (or squared sup-norm) of B w, certified.
RInterval certifiedNorm2(const IMatrix& b, const VecZ& w, NormKind norm) {
  mpfr_prec_t prec = b.a.empty() ? 64 : b.a.front().prec();
  RInterval acc(prec);
  for (int i = 0; i < b.rows; ++i) {
    RInterval coord(prec);
    for (int j = 0; j < b.cols; ++j) {
      if (w(j) == 0) continue;
      coord += b.at(i, j) * RInterval::fromInt(w(j), prec);
    }
    RInterval sq = coord.square();
    if (norm == NormKind::Euclidean) {
      acc += sq;
    } else if (mpfr_cmp(sq.hi(), acc.hi()) > 0) {
      acc = sq;  // interval max keyed on the upper bound
    }
  }
  return acc;
}

bool lexLess(const VecZ& a, const VecZ& b) {
  for (int i = 0; i < a.size(); ++i) {
    if (a(i) < b(i)) return true;
    if (b(i) < a(i)) return false;
  }
  return false;
}

MinimaResult selectMinima(const IMatrix& b, std::vector<VecZ> candidates, double relWidthFlag,
                          NormKind norm) {
  const int d = b.cols;
  struct Cand {
    VecZ w;
    RInterval n2;
  };
  std::vector<Cand> cands;
  cands.reserve(candidates.size());
  for (auto& w : candidates) {
    for (int i = 0; i < d; ++i) {  // canonical sign: first nonzero positive
      if (w(i) == 0) continue;
      if (w(i) < 0)
        for (int j = 0; j < d; ++j) w(j) = -w(j);
      break;
    }
    cands.push_back({w, certifiedNorm2(b, w, norm)});
  }
  std::sort(cands.begin(), cands.end(), [](const Cand& x, const Cand& y) {
    int cmp = mpfr_cmp(x.n2.hi(), y.n2.hi());
    if (cmp != 0) return cmp < 0;
    return lexLess(x.w, y.w);
  });
  std::set<std::vector<Int>> seen;

  MinimaResult res;
  MatQ chosen(d, d);
  int nChosen = 0;
  for (const auto& c : cands) {
    if (nChosen == d) break;
    std::vector<Int> key(c.w.data(), c.w.data() + d);
    if (!seen.insert(key).second) continue;
    MatQ trial(nChosen + 1, d);
    for (int i = 0; i < nChosen; ++i) trial.row(i) = chosen.row(i);
    for (int j = 0; j < d; ++j) trial(nChosen, j) = Rat(c.w(j));
    if (rank(trial) != nChosen + 1) continue;
    chosen.row(nChosen) = trial.row(nChosen);
    ++nChosen;
    res.minimizers.push_back(c.w);
    res.minima.push_back(c.n2.sqrt());
    if (c.n2.relWidthDouble() > relWidthFlag) res.precisionFlag = true;
  }
  if (nChosen < d)
    throw PrecisionError("successiveMinima: fewer than d independent candidates");
  return res;
}

}  // namespace

void lllReduce(const MatZ& m, MatZ& r, MatZ& u) {
  Gram g = gramOfIntCols(m);
  lllGram(g, u);
  const int rows = static_cast<int>(m.rows());
  const int d = static_cast<int>(m.cols());
  r = MatZ::Zero(rows, d);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < d; ++j) {
      Int acc(0);
      for (int k = 0; k < d; ++k) acc += m(i, k) * u(k, j);
      r(i, j) = acc;
    }
}

MinimaResult successiveMinima(const IMatrix& b, const MinimaOptions& opts) {
  const int d = b.cols;
  if (b.rows != d) throw std::invalid_argument("successiveMinima: square basis required");
  mpfr_prec_t prec = b.a.front().prec();

  // fixed-point snapshot of the midpoint basis at scale 2^prec
  MatZ m(d, d);
  mpfr_t mid;
  mpfr_init2(mid, prec + 8);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      mpfr_add(mid, b.at(i, j).lo(), b.at(i, j).hi(), MPFR_RNDN);
      mpfr_mul_2si(mid, mid, static_cast<long>(prec) - 1, MPFR_RNDN);
      Int z;
      mpfr_get_z(z.get_mpz_t(), mid, MPFR_RNDN);
      m(i, j) = z;
    }
  mpfr_clear(mid);

  MatQ mq(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) mq(i, j) = Rat(m(i, j));
  if (determinant<Rat>(mq).isZero())
    throw PrecisionError("successiveMinima: interval basis midpoint is singular");

  Gram g0 = gramOfIntCols(m);
  Rat inflate = opts.boundFactor * opts.boundFactor;
  std::vector<VecZ> xs = exactSuccessiveMinima(g0, inflate, opts.candidateCap);
  if (opts.norm == NormKind::Euclidean)
    return selectMinima(b, std::move(xs), opts.relWidthFlag, opts.norm);

  // Sup norm: a sup-minimizer x satisfies ||x||_E <= sqrt(d) lambda^E_d, so a
  // complete candidate set is the Euclidean ball of that radius. Skewed
  // lattices can make this ball huge; the cap turns that into an error
  // (sup-norm is an option, never used by the certified fixtures).
  auto normSq = [&](const VecZ& x) {
    Rat acc(0);
    for (int i = 0; i < d; ++i) {
      if (x(i) == 0) continue;
      for (int j = 0; j < d; ++j) {
        if (x(j) == 0) continue;
        acc += Rat(x(i)) * g0[static_cast<size_t>(i)][static_cast<size_t>(j)] * Rat(x(j));
      }
    }
    return acc;
  };
  Rat maxN2(0);
  for (const auto& x : xs) maxN2 = std::max(maxN2, normSq(x));
  MatZ u;
  lllGram(g0, u);
  Gram gr = conjugate(g0, u);
  GSDecomp gs = gsDecompose(gr);
  std::vector<VecZ> cands;
  QFEnum en;
  en.gs = &gs;
  en.theta = nullptr;
  en.skipZero = true;
  en.cap = opts.candidateCap;
  en.radius2 = Rat(d) * maxN2 * inflate;
  en.visit = [&](const std::vector<Int>& c, const Rat&) {
    VecZ x(d);
    for (int i = 0; i < d; ++i) {
      Int acc(0);
      for (int j = 0; j < d; ++j) acc += u(i, j) * c[static_cast<size_t>(j)];
      x(i) = acc;
    }
    cands.push_back(std::move(x));
  };
  en.run();
  return selectMinima(b, std::move(cands), opts.relWidthFlag, opts.norm);
}

MinimaResult minimaByBox(const IMatrix& b, long box) {
  const int d = b.cols;
  std::vector<VecZ> cands;
  VecZ cur(d);
  std::function<void(int)> rec = [&](int pos) {
    if (pos == d) {
      bool allZero = true;
      for (int i = 0; i < d; ++i)
        if (cur(i) != 0) allZero = false;
      if (!allZero) cands.push_back(cur);
      return;
    }
    for (long v = -box; v <= box; ++v) {
      cur(pos) = v;
      rec(pos + 1);
    }
  };
  rec(0);
  return selectMinima(b, std::move(cands), 1e-6, NormKind::Euclidean);
}

}  // namespace hnflow
