#include "shiftlab/moments.hpp"

#include <algorithm>
#include <map>

#include "shiftlab/error.hpp"
#include "shiftlab/psd.hpp"

namespace shiftlab {

AtomicMeasure AtomicMeasure::from_atoms(std::vector<Atom> atoms) {
  std::map<Rational, Rational> merged;
  for (auto& a : atoms) {
    if (sgn(a.t) < 0) {
      throw Error(ErrorCode::InvalidMeasure, "atom location " + to_string(a.t) + " is negative");
    }
    if (sgn(a.w) < 0) {
      throw Error(ErrorCode::InvalidMeasure, "atom mass " + to_string(a.w) + " is negative");
    }
    merged[a.t] += a.w;
  }
  AtomicMeasure m;
  for (auto& [t, w] : merged) {
    if (!is_zero(w)) m.atoms_.push_back({t, w});
  }
  return m;
}

AtomicMeasure AtomicMeasure::dirac(const Rational& t, const Rational& w) {
  return from_atoms({{t, w}});
}

Rational AtomicMeasure::total_mass() const {
  Rational sum = 0;
  for (const auto& a : atoms_) sum += a.w;
  return sum;
}

Rational AtomicMeasure::mass_at_zero() const {
  return has_atom_at_zero() ? atoms_.front().w : Rational(0);
}

Rational AtomicMeasure::moment(unsigned n) const {
  Rational sum = 0;
  for (const auto& a : atoms_) sum += a.w * pow(a.t, n);
  return sum;
}

AtomicMeasure AtomicMeasure::scaled(const Rational& c) const {
  if (sgn(c) < 0) throw Error(ErrorCode::InvalidMeasure, "negative scale factor");
  AtomicMeasure m;
  if (is_zero(c)) return m;
  m.atoms_ = atoms_;
  for (auto& a : m.atoms_) a.w *= c;
  return m;
}

AtomicMeasure AtomicMeasure::times_power(unsigned k) const {
  std::vector<Atom> out;
  for (const auto& a : atoms_) out.push_back({a.t, a.w * pow(a.t, k)});
  return from_atoms(std::move(out));
}

AtomicMeasure AtomicMeasure::divided_by_power(unsigned k) const {
  if (k == 0) return *this;
  if (has_atom_at_zero()) {
    throw Error(ErrorCode::InvalidMeasure, "cannot divide a measure with an atom at 0 by t^k");
  }
  AtomicMeasure m;
  m.atoms_ = atoms_;
  for (auto& a : m.atoms_) a.w /= pow(a.t, k);
  return m;
}

MomentSeq MomentSeq::from_values(std::vector<Rational> values) {
  bool zero_seen = false;
  for (std::size_t n = 0; n < values.size(); ++n) {
    if (sgn(values[n]) < 0) {
      throw Error(ErrorCode::InvalidArgument,
                  "moment a_" + std::to_string(n) + " is negative");
    }
    if (n == 0) continue;
    if (zero_seen && !is_zero(values[n])) {
      throw Error(ErrorCode::InvalidArgument,
                  "a_" + std::to_string(n) + " is nonzero after a vanishing moment");
    }
    if (is_zero(values[n])) zero_seen = true;
  }
  MomentSeq a;
  a.a_ = std::move(values);
  return a;
}

MomentSeq moments_of(const AtomicMeasure& m, std::size_t n_max) {
  MomentSeq a;
  a.a_.assign(n_max + 1, Rational(0));
  for (const auto& atom : m.atoms()) {
    Rational power = 1;
    for (std::size_t n = 0; n <= n_max; ++n) {
      a.a_[n] += atom.w * power;
      power *= atom.t;
    }
  }
  return a;
}

MomentSeq shift_index(const MomentSeq& a, std::size_t k) {
  if (k >= a.size()) return MomentSeq{};
  return MomentSeq::from_values({a.values().begin() + static_cast<std::ptrdiff_t>(k),
                                 a.values().end()});
}

namespace {

RationalMatrix hankel(const MomentSeq& a, std::size_t size, std::size_t offset) {
  RationalMatrix h(size, std::vector<Rational>(size));
  for (std::size_t i = 0; i < size; ++i) {
    for (std::size_t j = 0; j < size; ++j) h[i][j] = a[i + j + offset];
  }
  return h;
}

// Smallest leading block of the Hankel matrix that fails, or 0.
std::size_t first_failing_block(const MomentSeq& a, std::size_t size, std::size_t offset) {
  if (size == 0 || is_psd(hankel(a, size, offset))) return 0;
  for (std::size_t s = 1; s <= size; ++s) {
    if (!is_psd(hankel(a, s, offset))) return s;
  }
  return size;
}

}  // namespace

HankelVerdict hankel_check(const MomentSeq& a) {
  HankelVerdict v;
  if (a.size() == 0) return v;
  const std::size_t n = a.size() - 1;
  const std::size_t size0 = n / 2 + 1;
  const std::size_t size1 = n >= 1 ? (n - 1) / 2 + 1 : 0;
  if (auto s = first_failing_block(a, size0, 0)) {
    v.consistent = false;
    v.matrix = 0;
    v.minor_size = s;
    return v;
  }
  if (auto s = first_failing_block(a, size1, 1)) {
    v.consistent = false;
    v.matrix = 1;
    v.minor_size = s;
    return v;
  }
  v.upto = n;
  return v;
}

std::optional<Rational> neg_moment(const AtomicMeasure& m, unsigned k) {
  if (k == 0) return m.total_mass();
  if (m.has_atom_at_zero()) return std::nullopt;
  Rational sum = 0;
  for (const auto& a : m.atoms()) sum += a.w / pow(a.t, k);
  return sum;
}

std::optional<MomentExtension> backward_extend_moments(const AtomicMeasure& m, unsigned k) {
  if (m.empty()) {
    throw Error(ErrorCode::ZeroMeasure, "the zero measure has no backward extension");
  }
  auto neg = neg_moment(m, k);
  if (!neg || *neg > 1) return std::nullopt;
  MomentExtension ext;
  ext.k = k;
  ext.defect = 1 - *neg;
  auto body = m.divided_by_power(k).atoms();
  body.push_back({Rational(0), ext.defect});
  ext.measure = AtomicMeasure::from_atoms(std::move(body));
  for (unsigned j = k; j >= 1; --j) ext.prefix.push_back(ext.measure.moment(k - j));
  return ext;
}

AtomicMeasure mixture(std::span<const std::pair<Rational, AtomicMeasure>> parts) {
  std::vector<Atom> atoms;
  for (const auto& [c, m] : parts) {
    if (sgn(c) < 0) throw Error(ErrorCode::InvalidMeasure, "negative mixture coefficient");
    for (const auto& a : m.atoms()) atoms.push_back({a.t, c * a.w});
  }
  return AtomicMeasure::from_atoms(std::move(atoms));
}

bool determinacy_guard(const MomentSeq& a, const Rational& r) {
  if (a.size() == 0) return true;
  Rational bound = a[0];
  const Rational r2 = r * r;
  for (std::size_t n = 0; 2 * n < a.size(); ++n) {
    if (a[2 * n] > bound) return false;
    bound *= r2;
  }
  return true;
}

}  // namespace shiftlab
