#pragma once

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <utility>

#include "hnflow/tau.hpp"

namespace hnflow {

/// Evaluation contract phi: subspaces of K^d -> Q with phi(0) = 0.
/// Submodularity is a tested property of an oracle, never an assumption.
template <class K>
class SubmodularOracle {
 public:
  using Fn = std::function<Rat(const Subspace<K>&)>;

  SubmodularOracle() = default;
  SubmodularOracle(Fn fn, std::string label) : fn_(std::move(fn)), label_(std::move(label)) {}

  Rat operator()(const Subspace<K>& v) const {
    if (v.dim() == 0) return Rat(0);
    return fn_(v);
  }
  const std::string& label() const { return label_; }

 private:
  Fn fn_;
  std::string label_;
};

template <class K>
SubmodularOracle<K> tauOracle(MatrixFamily<K> fam, Flow a) {
  std::string label = "tau[" + (fam.label.empty() ? std::string("family") : fam.label) + "]";
  auto fam_ = std::make_shared<MatrixFamily<K>>(std::move(fam));
  auto a_ = std::make_shared<Flow>(std::move(a));
  return SubmodularOracle<K>(
      [fam_, a_](const Subspace<K>& v) { return tauFamily<K>(*fam_, v, *a_); }, label);
}

/// Explicit finite map for tests; throws on unknown subspaces.
template <class K>
SubmodularOracle<K> tableOracle(std::map<Subspace<K>, Rat> table, std::string label = "table") {
  auto t = std::make_shared<std::map<Subspace<K>, Rat>>(std::move(table));
  return SubmodularOracle<K>(
      [t](const Subspace<K>& v) {
        auto it = t->find(v);
        if (it == t->end()) throw std::out_of_range("tableOracle: subspace not in table");
        return it->second;
      },
      std::move(label));
}

/// Memoizing wrapper; phi is pure so caching is transparent.
template <class K>
SubmodularOracle<K> memoized(SubmodularOracle<K> inner) {
  auto cache = std::make_shared<std::map<Subspace<K>, Rat>>();
  auto in = std::make_shared<SubmodularOracle<K>>(std::move(inner));
  std::string label = in->label();
  return SubmodularOracle<K>(
      [cache, in](const Subspace<K>& v) {
        auto it = cache->find(v);
        if (it != cache->end()) return it->second;
        Rat val = (*in)(v);
        cache->emplace(v, val);
        return val;
      },
      std::move(label));
}

}  // namespace hnflow
