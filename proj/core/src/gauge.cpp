#include "shiftlab/gauge.hpp"

#include <cmath>
#include <deque>
#include <functional>

#include "shiftlab/error.hpp"

namespace shiftlab {

namespace {

template <class C>
struct PhaseOps;

template <>
struct PhaseOps<std::complex<double>> {
  using C = std::complex<double>;
  static bool is_zero(const C& z) { return z == C(0.0, 0.0); }
  static C one() { return {1.0, 0.0}; }
  // lambda / |lambda|
  static C unit(const C& z, const std::string&) { return z / std::abs(z); }
  static C conj(const C& z) { return std::conj(z); }
};

template <>
struct PhaseOps<GaussianRational> {
  using C = GaussianRational;
  static bool is_zero(const C& z) { return z.is_zero(); }
  static C one() { return {Rational(1), Rational(0)}; }
  static C unit(const C& z, const std::string& id) {
    auto modulus = exact_sqrt(z.norm_sq());
    if (!modulus) {
      throw Error(ErrorCode::NonRationalModulus,
                  "|lambda| at '" + id + "' is not rational", {id});
    }
    return z / *modulus;
  }
  static C conj(const C& z) { return z.conj(); }
};

template <class C>
std::map<VertexId, C> gauge(const DirectedForest& f, const std::map<VertexId, C>& lambda) {
  using Ops = PhaseOps<C>;
  std::vector<C> w(f.size(), C{});
  for (const auto& [id, z] : lambda) {
    auto i = f.index(id);
    if (f.is_root(i) && !Ops::is_zero(z)) {
      throw Error(ErrorCode::InvalidWeights, "root '" + id + "' must carry weight 0", {id});
    }
    w[i] = z;
  }
  // Edges of the proper forest: v -- p(v) whenever lambda_v != 0.
  std::vector<std::vector<std::size_t>> kids(f.size());
  std::vector<bool> linked(f.size(), false);
  std::vector<C> unit(f.size(), Ops::one());
  for (std::size_t v = 0; v < f.size(); ++v) {
    if (f.is_root(v) || Ops::is_zero(w[v])) continue;
    linked[v] = true;
    unit[v] = Ops::unit(w[v], f.id(v));
    kids[f.parent(v)].push_back(v);
  }
  std::vector<std::optional<C>> beta(f.size());
  // Vertices are indexed in id order, so the first unvisited vertex is the
  // smallest member of its component.
  for (std::size_t rep = 0; rep < f.size(); ++rep) {
    if (beta[rep]) continue;
    beta[rep] = Ops::one();
    std::deque<std::size_t> queue{rep};
    while (!queue.empty()) {
      auto v = queue.front();
      queue.pop_front();
      // Downwards: beta_c = beta_v |lambda_c| / lambda_c.
      for (auto c : kids[v]) {
        if (beta[c]) continue;
        beta[c] = *beta[v] * Ops::conj(unit[c]);
        queue.push_back(c);
      }
      // Upwards: beta_p = beta_v lambda_v / |lambda_v|.
      if (linked[v]) {
        auto p = f.parent(v);
        if (!beta[p]) {
          beta[p] = *beta[v] * unit[v];
          queue.push_back(p);
        }
      }
    }
  }
  std::map<VertexId, C> out;
  for (std::size_t v = 0; v < f.size(); ++v) out.emplace(f.id(v), *beta[v]);
  return out;
}

}  // namespace

std::map<VertexId, std::complex<double>> phase_gauge(
    const DirectedForest& forest, const std::map<VertexId, std::complex<double>>& lambda) {
  return gauge(forest, lambda);
}

std::map<VertexId, GaussianRational> phase_gauge(
    const DirectedForest& forest, const std::map<VertexId, GaussianRational>& lambda) {
  return gauge(forest, lambda);
}

}  // namespace shiftlab
