#pragma once

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "shiftlab/forest.hpp"
#include "shiftlab/rational.hpp"
#include "shiftlab/shift.hpp"

namespace shiftlab {

enum class NumericMode { Exact, Float };

// Default tolerance of float mode.
inline constexpr double kDefaultTolerance = 1e-9;

enum class HypoVerdict { Hyponormal, NotHyponormal, LeafObstruction };
std::string_view to_string(HypoVerdict v);

template <class Scalar>
struct HipValue {
  Node node;
  std::string label;
  Scalar value;
};

// Outcome of the test for S^k. `values` lists hip_k at every checked
// position: core vertices in id order, then tail positions up to the depth
// where the value is provably 1.
template <class Scalar>
struct BasicHipReport {
  unsigned k = 1;
  HypoVerdict verdict = HypoVerdict::Hyponormal;
  std::string witness;  // first failing position, empty when hyponormal
  std::vector<HipValue<Scalar>> values;

  const Scalar* find(std::string_view label) const {
    for (const auto& v : values) {
      if (v.label == label) return &v.value;
    }
    return nullptr;
  }
  bool holds() const { return verdict == HypoVerdict::Hyponormal; }
};

using HipReport = BasicHipReport<Rational>;
using FloatHipReport = BasicHipReport<double>;

// hip_k(x) = sum over u in chi_k(x) of |lambda_u^(k)|^2 / ||S^k e_u||^2.
// Requires a proper leafless shift and k >= 1. Scalar is Rational or double.
template <class Scalar>
Scalar hip_k(const WeightedShift& s, const Node& x, unsigned k);
Rational hip_k(const WeightedShift& s, std::string_view label, unsigned k);

// Positions at which the checker evaluates hip_k: every core vertex, and
// tail positions 1..len+2k below each tailed vertex.
std::vector<Node> checked_positions(const WeightedShift& s, unsigned k);

// Is S^k hyponormal? A non-root position of the k-th power without k-th
// children gives LeafObstruction; otherwise hip_k <= 1 everywhere is the
// criterion. Float mode compares against 1 + tol. Throws NotProper.
template <class Scalar>
BasicHipReport<Scalar> check_hyponormal_power(const WeightedShift& s, unsigned k,
                                              double tol = 0.0);

template <class Scalar>
struct BasicPowerHypoReport {
  std::vector<BasicHipReport<Scalar>> reports;  // k = 1..k_max
  // Every component is an n-arm star; then hyponormality of S alone decides
  // power hyponormality for all k.
  bool forkless = false;
  bool holds() const;
  // The verdict covers every k: a failure, or a pass on a forkless forest.
  bool conclusive() const { return forkless || !holds(); }
  // First failing report, if any.
  const BasicHipReport<Scalar>* first_failure() const;
};

using PowerHypoReport = BasicPowerHypoReport<Rational>;
using FloatPowerHypoReport = BasicPowerHypoReport<double>;

template <class Scalar>
BasicPowerHypoReport<Scalar> check_power_hyponormal(const WeightedShift& s, unsigned k_max,
                                                    double tol = 0.0);

// True when every component of the tailed forest is an n-arm star.
bool is_forkless(const WeightedShift& s);

// Positive semidefiniteness of f -> ||S^k f||^2 - ||S*^k f||^2 restricted to
// functions supported on chi_k(x). Exact: LDL^T of the congruent matrix
// diag(m_u(k) / |lambda_u^(k)|^2) - J. Float: eigenvalues of
// diag(m_u(k)) - w w^T with w_u = |lambda_u^(k)|.
bool psd_oracle(const WeightedShift& s, const Node& x, unsigned k);
bool psd_oracle_float(const WeightedShift& s, const Node& x, unsigned k, double tol);

// A hyponormal shift whose square is not hyponormal, on a leafless tree
// that is not forkless.
struct Counterexample {
  WeightedShift shift;
  VertexId v0;  // parent of v1
  VertexId v1;  // the fork
  VertexId v2;  // distinguished child of v1
  Rational beta;          // 0 when v1 has no siblings, else 1/2
  Rational expected_hip2; // (10 - beta) / 9
};

// `tailed` lists the childless vertices that carry a tail. Without `v1` the
// fork of smallest id with a non-root parent is used. Throws NotATree,
// HasLeaf, ForklessInput, RootFork, InvalidArgument.
Counterexample make_counterexample(const DirectedForest& tree, const std::set<VertexId>& tailed,
                                   std::optional<VertexId> v1 = std::nullopt);

}  // namespace shiftlab
