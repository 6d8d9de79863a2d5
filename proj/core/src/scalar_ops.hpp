#pragma once

#include <cmath>

#include "shiftlab/rational.hpp"
#include "shiftlab/surd.hpp"

namespace shiftlab::detail {

// Conversions from exact squared weights into the arithmetic a kernel runs in.
template <class Scalar>
struct ScalarOps;

template <>
struct ScalarOps<Rational> {
  static Rational from(const Rational& r) { return r; }
  static bool is_zero(const Rational& x) { return shiftlab::is_zero(x); }
};

template <>
struct ScalarOps<double> {
  static double from(const Rational& r) { return r.get_d(); }
  static double sqrt_of(const Rational& r) { return std::sqrt(r.get_d()); }
  static bool is_zero(double x) { return x == 0.0; }
};

template <>
struct ScalarOps<Surd> {
  static Surd sqrt_of(const Rational& r) { return Surd::sqrt(r); }
  static bool is_zero(const Surd& x) { return x.is_zero(); }
};

}  // namespace shiftlab::detail
