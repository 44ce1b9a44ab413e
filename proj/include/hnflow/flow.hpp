#pragma once

#include <algorithm>
#include <numeric>
#include <vector>

#include "hnflow/rational.hpp"

namespace hnflow {

/// One-parameter diagonal semigroup diag(e^{A_1 t}, ..., e^{A_d t}) with
/// exact rational weights; order of the weights is unconstrained.
struct Flow {
  std::vector<Rat> weights;

  Flow() = default;
  explicit Flow(std::vector<Rat> w) : weights(std::move(w)) {
    if (weights.empty()) throw std::invalid_argument("Flow: need d >= 1");
  }

  int dim() const { return static_cast<int>(weights.size()); }

  Rat sum() const {
    Rat s(0);
    for (const auto& w : weights) s += w;
    return s;
  }

  bool isUnimodular() const { return sum().isZero(); }

  Rat maxAbs() const {
    Rat m(0);
    for (const auto& w : weights) m = std::max(m, w.abs());
    return m;
  }

  /// Stable permutation sigma with weights[sigma[0]] >= ... >= weights[sigma[d-1]].
  std::vector<int> descendingPermutation() const {
    std::vector<int> p(weights.size());
    std::iota(p.begin(), p.end(), 0);
    std::stable_sort(p.begin(), p.end(),
                     [this](int a, int b) { return weights[b] < weights[a]; });
    return p;
  }

  friend bool operator==(const Flow& a, const Flow& b) { return a.weights == b.weights; }
  friend bool operator<(const Flow& a, const Flow& b) {
    if (a.weights.size() != b.weights.size()) return a.weights.size() < b.weights.size();
    for (size_t i = 0; i < a.weights.size(); ++i) {
      if (a.weights[i] < b.weights[i]) return true;
      if (b.weights[i] < a.weights[i]) return false;
    }
    return false;
  }
};

}  // namespace hnflow
