#pragma once

#include <Eigen/Core>

#include "hnflow/number_field.hpp"
#include "hnflow/rational.hpp"

namespace Eigen {

template <>
struct NumTraits<hnflow::Rat> : GenericNumTraits<hnflow::Rat> {
  using Real = hnflow::Rat;
  using NonInteger = hnflow::Rat;
  using Nested = hnflow::Rat;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 8,
    AddCost = 40,
    MulCost = 40,
  };
  static inline Real epsilon() { return hnflow::Rat(0); }
  static inline Real dummy_precision() { return hnflow::Rat(0); }
  static inline int digits10() { return 0; }
};

template <>
struct NumTraits<hnflow::NFElem> : GenericNumTraits<hnflow::NFElem> {
  using Real = hnflow::NFElem;
  using NonInteger = hnflow::NFElem;
  using Nested = hnflow::NFElem;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 16,
    AddCost = 120,
    MulCost = 240,
  };
  static inline Real epsilon() { return hnflow::NFElem(0); }
  static inline Real dummy_precision() { return hnflow::NFElem(0); }
  static inline int digits10() { return 0; }
};

template <>
struct NumTraits<hnflow::Int> : GenericNumTraits<hnflow::Int> {
  using Real = hnflow::Int;
  using NonInteger = hnflow::Rat;
  using Nested = hnflow::Int;
  enum {
    IsComplex = 0,
    IsInteger = 1,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 8,
    AddCost = 30,
    MulCost = 30,
  };
  static inline Real epsilon() { return hnflow::Int(0); }
  static inline Real dummy_precision() { return hnflow::Int(0); }
  static inline int digits10() { return 0; }
};

}  // namespace Eigen

namespace hnflow {

template <class K>
using Matrix = Eigen::Matrix<K, Eigen::Dynamic, Eigen::Dynamic>;
template <class K>
using Vector = Eigen::Matrix<K, Eigen::Dynamic, 1>;

using MatQ = Matrix<Rat>;
using VecQ = Vector<Rat>;
using MatZ = Matrix<Int>;
using VecZ = Vector<Int>;

}  // namespace hnflow
