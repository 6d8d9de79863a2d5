#pragma once

#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "shiftlab/forest.hpp"
#include "shiftlab/moments.hpp"
#include "shiftlab/rational.hpp"
#include "shiftlab/surd.hpp"

namespace shiftlab {

// Unary infinite continuation below a childless core vertex. The edge into
// the d-th tail position (d >= 1) has squared weight prefix_sq[d-1] while
// d <= prefix_sq.size(), and constant_sq afterwards.
struct TailProfile {
  std::vector<Rational> prefix_sq;
  Rational constant_sq = 1;

  const Rational& edge_sq(std::size_t depth) const;
  // edge_sq(d+1) * ... * edge_sq(d+n).
  Rational product(std::size_t d, std::size_t n) const;
  bool operator==(const TailProfile&) const = default;
};

// A position of the tailed forest: the core vertex `core` when depth == 0,
// otherwise the depth-th tail position below it. Ordered core-first.
struct Node {
  std::size_t core = 0;
  std::size_t depth = 0;
  auto operator<=>(const Node&) const = default;
};

enum class LeafPolicy { Forbid, Allow };

// Weighted shift on a finite forest with tails, described by squared weights.
// Immutable after construction.
class WeightedShift {
 public:
  // Validates: sq keys are vertices, every non-root vertex has an entry,
  // roots have 0, all entries >= 0 (InvalidWeights / UnknownVertex); tails
  // sit on childless vertices and have positive entries (InvalidTail); with
  // LeafPolicy::Forbid no non-root vertex is childless without a tail
  // (HasLeaf).
  WeightedShift(DirectedForest forest, const std::map<VertexId, Rational>& sq,
                std::map<VertexId, TailProfile> tails = {},
                LeafPolicy leaves = LeafPolicy::Forbid);

  const DirectedForest& forest() const noexcept { return forest_; }
  const Rational& sq(std::size_t i) const { return sq_[i]; }
  const Rational& sq(std::string_view id) const { return sq_[forest_.index(id)]; }
  std::map<VertexId, Rational> sq_map() const;
  const std::map<VertexId, TailProfile>& tails() const noexcept { return tails_; }
  const TailProfile* tail(std::size_t i) const;
  std::set<VertexId> tailed_vertices() const;
  LeafPolicy leaf_policy() const noexcept { return leaves_; }

  // Squared weights vanish exactly on roots.
  bool is_proper() const;
  std::optional<std::size_t> first_zero_weight() const;
  // Every non-root core vertex has a child or a tail.
  bool is_leafless() const { return !first_leaf().has_value(); }
  std::optional<std::size_t> first_leaf() const;

  // Squared weight of the edge entering n (0 at roots).
  const Rational& edge_sq(const Node& n) const;
  std::vector<Node> children(const Node& n) const;
  std::optional<Node> parent(const Node& n) const;
  bool is_root(const Node& n) const { return n.depth == 0 && forest_.is_root(n.core); }
  std::size_t depth(const Node& n) const { return forest_.depth(n.core) + n.depth; }
  // "id" for core vertices, "id#d" for tail positions.
  std::string label(const Node& n) const;
  // Inverse of label(). Throws Error(UnknownVertex).
  Node node(std::string_view label) const;

  bool operator==(const WeightedShift& other) const {
    return forest_ == other.forest_ && sq_ == other.sq_ && tails_ == other.tails_;
  }

 private:
  DirectedForest forest_;
  std::vector<Rational> sq_;
  std::map<VertexId, TailProfile> tails_;
  std::vector<std::optional<TailProfile>> tail_at_;
  LeafPolicy leaves_;
};

// Supremum over positions of the child squared-weight sum; equals ||S||^2.
Rational shift_norm_sq(const WeightedShift& s);

// Sum of squared weights of the children of n.
Rational child_sq_sum(const WeightedShift& s, const Node& n);

// Finitely supported vectors over positions.
template <class Scalar>
using ShiftVector = std::map<Node, Scalar>;

// (Sf)(u) = lambda_u f(p(u)) and (S*f)(v) = sum_{u in chi(v)} lambda_u f(u)
// with lambda = sqrt(sq). Instantiated for Surd (exact) and double.
template <class Scalar>
ShiftVector<Scalar> apply(const WeightedShift& s, const ShiftVector<Scalar>& f);
template <class Scalar>
ShiftVector<Scalar> apply_adjoint(const WeightedShift& s, const ShiftVector<Scalar>& f);

// S^k as a weighted shift on the k-th power of the tailed forest. The tail
// positions 1..k below every tailed vertex are materialised as core
// vertices; `origin` maps them back.
struct PoweredShift {
  WeightedShift shift;
  std::map<VertexId, Node> origin;
  unsigned k = 1;
  // Position of the original shift that a position of `shift` stands for.
  Node original(const WeightedShift& base, const Node& n) const;
};
PoweredShift power_weights(const WeightedShift& s, unsigned k);

// Cuts every zero-weight edge; the cut vertex becomes a root.
WeightedShift make_proper(const WeightedShift& s);

// Isometric weights on a leafless tree: core children of a vertex split the
// unit mass equally, tails carry constant 1. Throws HasLeaf, NotATree.
WeightedShift make_isometric(const DirectedForest& tree, const std::set<VertexId>& tailed);

// Restriction to Des(v) with v as the root.
WeightedShift restrict_shift(const WeightedShift& s, std::string_view v);

// Table of m_x(n) = ||S^n e_x||^2 for n = 0..n_max at core vertices, with the
// closed form at tail positions. Scalar is Rational or double.
template <class Scalar>
class MomentTable {
 public:
  MomentTable(const WeightedShift& s, unsigned n_max);
  unsigned n_max() const noexcept { return n_max_; }
  const Scalar& core(std::size_t i, unsigned n) const { return m_[n][i]; }
  Scalar at(const Node& x, unsigned n) const;

 private:
  std::vector<std::optional<TailProfile>> tails_;
  unsigned n_max_;
  std::vector<std::vector<Scalar>> m_;
};

// ||S^n e_v||^2. Throws NotProper, HasLeaf.
Rational moment(const WeightedShift& s, std::string_view v, unsigned n);

// Bottom-up representing measures.
struct NodeMeasure {
  enum class Status { Feasible, MassExceeds, AtomAtZero, ChildInfeasible };
  Status status = Status::Feasible;
  // Feasible: the representing measure of (m(n))_{n>=0}. MassExceeds: the
  // measure t^-1 rho, which matches m(n) for n >= 1 but has mass > 1.
  AtomicMeasure mu;
  Rational defect;                 // mass of mu at 0 when Feasible
  std::optional<Rational> excess;  // MassExceeds: neg_moment - 1
  bool locally_infeasible() const {
    return status == Status::MassExceeds || status == Status::AtomAtZero;
  }
};

std::string_view to_string(NodeMeasure::Status status);

class MeasureTable {
 public:
  // Throws NotProper, HasLeaf.
  explicit MeasureTable(const WeightedShift& s);

  const NodeMeasure& at(const Node& x) const;
  const NodeMeasure& core(std::size_t i) const { return core_[i]; }
  // Core vertices in id order, then stored tail positions.
  std::vector<Node> nodes() const;
  std::optional<Node> first_local_failure() const;
  bool all_feasible() const;

 private:
  std::vector<NodeMeasure> core_;
  // tail_[i][d-1] for d = 1..prefix length - 1; deeper positions carry
  // delta_c.
  std::vector<std::vector<NodeMeasure>> tail_;
  std::vector<NodeMeasure> deep_;  // delta_c per core vertex with a tail
};

NodeMeasure vertex_measure(const WeightedShift& s, std::string_view v);

}  // namespace shiftlab
