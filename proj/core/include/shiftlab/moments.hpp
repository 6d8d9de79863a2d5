#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "shiftlab/rational.hpp"

namespace shiftlab {

struct Atom {
  Rational t;  // location, >= 0
  Rational w;  // mass, > 0
  bool operator==(const Atom&) const = default;
};

// Finite positive combination of Dirac masses on [0, inf). Atoms are kept
// sorted by location with distinct locations and strictly positive masses;
// the empty list is the zero measure.
class AtomicMeasure {
 public:
  AtomicMeasure() = default;

  // Merges repeated locations and drops zero masses. Throws
  // Error(InvalidMeasure) for a negative location or mass.
  static AtomicMeasure from_atoms(std::vector<Atom> atoms);
  static AtomicMeasure dirac(const Rational& t, const Rational& w = Rational(1));

  const std::vector<Atom>& atoms() const noexcept { return atoms_; }
  std::size_t size() const noexcept { return atoms_.size(); }
  bool empty() const noexcept { return atoms_.empty(); }

  Rational total_mass() const;
  Rational mass_at_zero() const;
  bool has_atom_at_zero() const { return !atoms_.empty() && is_zero(atoms_.front().t); }

  // Integral of t^n (with 0^0 = 1).
  Rational moment(unsigned n) const;

  AtomicMeasure scaled(const Rational& c) const;
  // d(result) = t^k d(this); the representing measure of the shifted
  // sequence (a_{n+k}).
  AtomicMeasure times_power(unsigned k) const;
  // d(result) = t^-k d(this). Requires no atom at 0 when k >= 1.
  AtomicMeasure divided_by_power(unsigned k) const;

  bool operator==(const AtomicMeasure&) const = default;

 private:
  std::vector<Atom> atoms_;
};

// Finite prefix a_0..a_N of a moment sequence. The public constructors
// guarantee that a_k = 0 for some k >= 1 forces a_n = 0 for all n >= 1.
class MomentSeq {
 public:
  MomentSeq() = default;
  // Throws Error(InvalidArgument) for negative entries or when the zero
  // propagation rule is violated.
  static MomentSeq from_values(std::vector<Rational> values);

  const std::vector<Rational>& values() const noexcept { return a_; }
  std::size_t size() const noexcept { return a_.size(); }
  const Rational& operator[](std::size_t n) const { return a_[n]; }
  bool operator==(const MomentSeq&) const = default;

 private:
  friend MomentSeq moments_of(const AtomicMeasure& m, std::size_t n_max);
  std::vector<Rational> a_;
};

// a_n = sum_i w_i t_i^n for n = 0..n_max.
MomentSeq moments_of(const AtomicMeasure& m, std::size_t n_max);

// The tail (a_{n+k}) as a sequence in its own right.
MomentSeq shift_index(const MomentSeq& a, std::size_t k);

struct HankelVerdict {
  bool consistent = true;
  // Index N of the last term used; meaningful when consistent.
  std::size_t upto = 0;
  // On failure: which matrix (0 for (a_{i+j}), 1 for (a_{i+j+1})) and the
  // size of its smallest leading block that is not positive semidefinite.
  int matrix = -1;
  std::size_t minor_size = 0;
};

// Necessary Stieltjes conditions on a finite prefix. A failure certifies that
// the prefix is not a Stieltjes moment sequence; success is necessary only.
HankelVerdict hankel_check(const MomentSeq& a);

// Integral of t^-k. nullopt stands for +inf (an atom at 0 when k >= 1).
// k = 0 gives the total mass.
std::optional<Rational> neg_moment(const AtomicMeasure& m, unsigned k);

struct MomentExtension {
  unsigned k = 0;
  // a_{-k}, ..., a_{-1}; a_{-k} is the total mass of `measure`, normally 1.
  std::vector<Rational> prefix;
  // mu_k = t^-k mu + (1 - int t^-k dmu) delta_0.
  AtomicMeasure measure;
  Rational defect;  // mass of the added atom at 0
};

// Backward extension of the sequence represented by `m` by k steps with
// a_{-k} = 1. Returns nullopt when neg_moment(m, k) is infinite or exceeds 1.
// Throws Error(ZeroMeasure) for the zero measure.
std::optional<MomentExtension> backward_extend_moments(const AtomicMeasure& m, unsigned k);

// sum_j c_j mu_j with atoms merged; zero coefficients drop out. Throws
// Error(InvalidMeasure) for a negative coefficient.
AtomicMeasure mixture(std::span<const std::pair<Rational, AtomicMeasure>> parts);

// Growth certificate a_{2n} <= r^{2n} a_0 on the available prefix, where r is
// the squared operator norm. A diagnostic only: atomic representing measures
// are always unique.
bool determinacy_guard(const MomentSeq& a, const Rational& r);

}  // namespace shiftlab
