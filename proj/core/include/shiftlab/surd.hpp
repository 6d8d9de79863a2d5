#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "shiftlab/rational.hpp"

namespace shiftlab {

// Exact element of Q(sqrt r1, sqrt r2, ...): a finite sum of terms c*sqrt(r)
// with rational c != 0 and rational r > 0. Two radicands whose ratio is a
// rational square are merged into one term, so the terms of a value are
// linearly independent over Q and equality is decidable.
//
// This is the scalar type for exact shift application, where weights are
// square roots of the rational squared weights.
class Surd {
 public:
  Surd() = default;
  Surd(const Rational& value);  // NOLINT: implicit by design
  Surd(long value) : Surd(Rational(value)) {}  // NOLINT

  // sqrt(value) for value >= 0.
  static Surd sqrt(const Rational& value);

  bool is_zero() const noexcept { return terms_.empty(); }
  double to_double() const;
  // The rational value when the surd is rational.
  std::optional<Rational> as_rational() const;

  Surd& operator+=(const Surd& other);
  Surd& operator-=(const Surd& other);
  Surd& operator*=(const Surd& other);

  friend Surd operator+(Surd a, const Surd& b) { return a += b; }
  friend Surd operator-(Surd a, const Surd& b) { return a -= b; }
  friend Surd operator*(Surd a, const Surd& b) { return a *= b; }
  Surd operator-() const;

  friend bool operator==(const Surd& a, const Surd& b) { return (a - b).is_zero(); }

  // (coefficient, radicand) pairs.
  const std::vector<std::pair<Rational, Rational>>& terms() const noexcept { return terms_; }

  std::string str() const;

 private:
  void add_term(const Rational& coeff, const Rational& radicand);

  std::vector<std::pair<Rational, Rational>> terms_;
};

}  // namespace shiftlab
