#pragma once

#include <complex>
#include <map>
#include <string>

#include "shiftlab/forest.hpp"
#include "shiftlab/rational.hpp"

namespace shiftlab {

// Exact complex number with rational parts.
struct GaussianRational {
  Rational re;
  Rational im;

  GaussianRational() = default;
  GaussianRational(Rational r, Rational i = Rational(0)) : re(std::move(r)), im(std::move(i)) {}

  GaussianRational conj() const { return {re, -im}; }
  Rational norm_sq() const { return re * re + im * im; }
  bool is_zero() const { return shiftlab::is_zero(re) && shiftlab::is_zero(im); }
  std::complex<double> to_complex() const { return {re.get_d(), im.get_d()}; }

  friend GaussianRational operator+(const GaussianRational& a, const GaussianRational& b) {
    return {a.re + b.re, a.im + b.im};
  }
  friend GaussianRational operator-(const GaussianRational& a, const GaussianRational& b) {
    return {a.re - b.re, a.im - b.im};
  }
  friend GaussianRational operator*(const GaussianRational& a, const GaussianRational& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend GaussianRational operator/(const GaussianRational& a, const Rational& r) {
    return {a.re / r, a.im / r};
  }
  friend bool operator==(const GaussianRational&, const GaussianRational&) = default;
};

// Unimodular phases beta with beta_v conj(beta_p(v)) lambda_v = |lambda_v| at
// every non-root v with lambda_v != 0, and beta = 1 at the smallest vertex of
// each component of the proper forest (zero-weight edges cut). Conjugating by
// diag(beta) turns S_lambda into S_|lambda|.
//
// Missing entries mean 0; roots must have weight 0 (InvalidWeights).
std::map<VertexId, std::complex<double>> phase_gauge(
    const DirectedForest& forest, const std::map<VertexId, std::complex<double>>& lambda);

// Exact variant. Throws Error(NonRationalModulus) when some |lambda_v| is
// irrational.
std::map<VertexId, GaussianRational> phase_gauge(
    const DirectedForest& forest, const std::map<VertexId, GaussianRational>& lambda);

}  // namespace shiftlab
