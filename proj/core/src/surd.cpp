#include "shiftlab/surd.hpp"

#include <cmath>

#include "shiftlab/error.hpp"

namespace shiftlab {

Surd::Surd(const Rational& value) {
  if (!shiftlab::is_zero(value)) terms_.emplace_back(value, Rational(1));
}

Surd Surd::sqrt(const Rational& value) {
  if (sgn(value) < 0) {
    throw Error(ErrorCode::InvalidArgument, "square root of a negative rational");
  }
  Surd s;
  if (auto root = exact_sqrt(value)) {
    s.add_term(*root, Rational(1));
  } else {
    s.add_term(Rational(1), value);
  }
  return s;
}

void Surd::add_term(const Rational& coeff, const Rational& radicand) {
  if (shiftlab::is_zero(coeff)) return;
  for (auto it = terms_.begin(); it != terms_.end(); ++it) {
    if (auto ratio = exact_sqrt(radicand / it->second)) {
      it->first += coeff * *ratio;
      if (shiftlab::is_zero(it->first)) terms_.erase(it);
      return;
    }
  }
  terms_.emplace_back(coeff, radicand);
}

double Surd::to_double() const {
  double sum = 0.0;
  for (const auto& [c, r] : terms_) sum += c.get_d() * std::sqrt(r.get_d());
  return sum;
}

std::optional<Rational> Surd::as_rational() const {
  if (terms_.empty()) return Rational(0);
  if (terms_.size() == 1) {
    if (auto root = exact_sqrt(terms_.front().second)) return terms_.front().first * *root;
  }
  return std::nullopt;
}

Surd& Surd::operator+=(const Surd& other) {
  for (const auto& [c, r] : other.terms_) add_term(c, r);
  return *this;
}

Surd& Surd::operator-=(const Surd& other) {
  for (const auto& [c, r] : other.terms_) add_term(-c, r);
  return *this;
}

Surd& Surd::operator*=(const Surd& other) {
  Surd product;
  for (const auto& [c1, r1] : terms_) {
    for (const auto& [c2, r2] : other.terms_) product.add_term(c1 * c2, r1 * r2);
  }
  *this = std::move(product);
  return *this;
}

Surd Surd::operator-() const {
  Surd out = *this;
  for (auto& term : out.terms_) term.first = -term.first;
  return out;
}

std::string Surd::str() const {
  if (terms_.empty()) return "0";
  std::string out;
  for (const auto& [c, r] : terms_) {
    if (!out.empty()) out += " + ";
    out += to_string(c);
    if (r != 1) out += "*sqrt(" + to_string(r) + ")";
  }
  return out;
}

}  // namespace shiftlab
