#pragma once

#include <string>

#include "hnflow/number_field.hpp"
#include "hnflow/rational.hpp"

namespace hnflow {

/// Uniform hooks the field-generic engines need from a scalar type.
/// Instantiated for Rat (plain rationals) and NFElem (real number fields).
template <class K>
struct FieldTraits;

template <>
struct FieldTraits<Rat> {
  static bool isZero(const Rat& x) { return x.isZero(); }
  static Rat zero() { return Rat(0); }
  static Rat one() { return Rat(1); }
  static bool less(const Rat& a, const Rat& b) { return a < b; }
  static RatInterval enclosure(const Rat& x, int /*bits*/) { return RatInterval::point(x); }
  static bool isRationalValue(const Rat&) { return true; }
  static Rat rationalValue(const Rat& x) { return x; }
  static std::string str(const Rat& x) { return x.str(); }
};

template <>
struct FieldTraits<NFElem> {
  static bool isZero(const NFElem& x) { return x.isZero(); }
  static NFElem zero() { return NFElem(Rat(0)); }
  static NFElem one() { return NFElem(Rat(1)); }
  static bool less(const NFElem& a, const NFElem& b) { return a < b; }
  static RatInterval enclosure(const NFElem& x, int bits) { return x.enclosure(bits); }
  static bool isRationalValue(const NFElem& x) { return x.isRational(); }
  static Rat rationalValue(const NFElem& x) { return x.rational(); }
  static std::string str(const NFElem& x) { return x.str(); }
};

}  // namespace hnflow
