#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "shiftlab/forest.hpp"
#include "shiftlab/rational.hpp"
#include "shiftlab/shift.hpp"

namespace shiftlab {

enum class SubnormalVerdict { Subnormal, NotSubnormal };
std::string_view to_string(SubnormalVerdict v);

struct SubnormalCert {
  SubnormalVerdict verdict = SubnormalVerdict::Subnormal;
  MeasureTable table;
  // First position (in MeasureTable::nodes() order) where the recursion
  // breaks, and the excess int t^-1 d rho - 1 there (nullopt: rho has an
  // atom at 0, the excess is infinite).
  std::optional<Node> witness;
  std::optional<Rational> excess;

  bool holds() const { return verdict == SubnormalVerdict::Subnormal; }
};

// Bottom-up certification through the per-position representing measures.
// Throws NotProper, HasLeaf.
SubnormalCert check_subnormal(const WeightedShift& s);

// C_0 = int t^-k d mu_root when finite, nullopt when the measure has an atom
// at 0. k = 0 gives 1. Requires a single rooted tree (NotRootedTree) that is
// subnormal (NotSubnormalInput).
std::optional<Rational> backward_extension_feasible(const WeightedShift& s, unsigned k);

struct ExtensionPlan {
  unsigned k = 0;
  // new_edge_sq[l] is the squared weight of omega_l, the l-th vertex of the
  // chain counted upward from the old root omega_0.
  std::vector<Rational> new_edge_sq;
  Rational C;
  Rational C0;
  std::vector<VertexId> chain_ids;  // omega_1 .. omega_k
};

struct BackwardExtension {
  WeightedShift shift;
  ExtensionPlan plan;
  // a_{-k}, ..., a_{-1}, a_0 = C of the extended sequence.
  std::vector<Rational> prefix;
};

// k-step subnormal backward extension with scale C in (0, 1/C_0]; default
// C = 1/C_0. Throws Infeasible, ScaleOutOfRange, InvalidArgument (k = 0),
// plus the errors of backward_extension_feasible. The result is
// re-certified; a failure there raises InternalCheckFailed.
BackwardExtension construct_backward_extension(const WeightedShift& s, unsigned k,
                                               std::optional<Rational> C = std::nullopt);

struct RootedSumExtension {
  WeightedShift shift;
  std::vector<Rational> theta_sq;  // a_j, squared weight of member root j
  std::vector<Rational> C;         // int t^-1 d mu_j
  std::vector<Rational> D;         // int t^-(k+1) d mu_j
  VertexId root;
  std::vector<VertexId> member_roots;
};

// Joins rooted subnormal shifts under a fresh root so that the result is
// subnormal and admits a k-step subnormal backward extension. Every member
// needs a (k+1)-step extension. Ids are prefixed "j:" when members overlap.
// Throws EmptyFamily, NotRootedTree, NotSubnormalInput(j), MemberInfeasible(j).
RootedSumExtension rooted_sum_extend(std::span<const WeightedShift> members, unsigned k);

struct DepthJoin {
  WeightedShift shift;
  std::vector<VertexId> frontier;  // envelope vertex carrying member j
};

// Subnormal weights on `envelope` with member j grafted at the j-th vertex
// (in id order) of chi_k(root). The envelope is a rooted tree whose leaves all
// sit at depth k. Members keep their ids (prefixed "j:" on overlap); the
// member root takes the id of its frontier vertex. Throws FrontierMismatch,
// EmptyFamily, NotRootedTree, NotSubnormalInput(j), MemberInfeasible(j).
DepthJoin join_at_depth(std::span<const WeightedShift> members, const DirectedForest& envelope,
                        unsigned k);

struct PowerHypoJoin {
  WeightedShift shift;
  std::vector<Rational> a_sq;      // a_j^2
  std::vector<Rational> theta_sq;  // a_j^2 * ext_sq[j], squared weight of member root j
  VertexId root;
  std::vector<VertexId> member_roots;
};

// Rooted sum whose root satisfies hip_k(root) = sum_j a_j^2 hip_k(omega_j')
// where omega_j' is the new root of the 1-step extension of member j with
// squared weight ext_sq[j]. Each such extension must pass the power
// hyponormality check up to k_max (MemberNotExtendable(j)); the joint shift
// is re-checked up to k_max.
PowerHypoJoin powerhypo_rooted_sum_extend(std::span<const WeightedShift> members,
                                          std::span<const Rational> ext_sq, unsigned k_max);

// The 1-step extension of a rooted shift with the given squared weight on
// the old root.
WeightedShift one_step_extension(const WeightedShift& s, const Rational& sq);

}  // namespace shiftlab
