#include "shiftlab/subnormal.hpp"

#include <algorithm>
#include <functional>

#include "shiftlab/error.hpp"
#include "shiftlab/hypo.hpp"
#include "shiftlab/moments.hpp"

namespace shiftlab {

std::string_view to_string(SubnormalVerdict v) {
  switch (v) {
    case SubnormalVerdict::Subnormal: return "Subnormal";
    case SubnormalVerdict::NotSubnormal: return "NotSubnormal";
  }
  return "Unknown";
}

namespace {

void ensure(bool condition, const std::string& what) {
  if (!condition) throw Error(ErrorCode::InternalCheckFailed, what);
}

Node root_node(const WeightedShift& s) {
  return Node{s.forest().index(tree_root(s.forest())), 0};
}

void require_tree(const WeightedShift& s, std::optional<std::size_t> member = std::nullopt) {
  if (!is_tree(s.forest())) {
    std::vector<std::string> witness;
    if (member) witness.push_back(std::to_string(*member));
    throw Error(ErrorCode::NotRootedTree, "shift must live on a single rooted tree", witness);
  }
}

// Representing measure at the root of a subnormal member.
AtomicMeasure member_measure(const WeightedShift& s, std::size_t j) {
  require_tree(s, j);
  auto cert = check_subnormal(s);
  if (!cert.holds()) {
    throw Error(ErrorCode::NotSubnormalInput, "member " + std::to_string(j) + " is not subnormal",
                {std::to_string(j)});
  }
  return cert.table.at(root_node(s)).mu;
}

struct RootSumWeights {
  std::vector<Rational> a, C, D;
};

// a'_j = 2^-j for j >= 1 with the balancing member j0 = 0, so that
// sum_j a_j C_j = 1 and sum_j a_j D_j < inf.
RootSumWeights rootsum_weights(const std::vector<AtomicMeasure>& mus, unsigned k) {
  RootSumWeights w;
  for (std::size_t j = 0; j < mus.size(); ++j) {
    auto D = neg_moment(mus[j], k + 1);
    if (!D) {
      throw Error(ErrorCode::MemberInfeasible,
                  "member " + std::to_string(j) + " has no " + std::to_string(k + 1) +
                      "-step subnormal backward extension",
                  {std::to_string(j)});
    }
    w.C.push_back(*neg_moment(mus[j], 1));
    w.D.push_back(*D);
  }
  w.a.resize(mus.size());
  Rational used = 0;
  for (std::size_t j = 1; j < mus.size(); ++j) {
    Rational cap = 1;
    cap = std::min(cap, Rational(1 / w.C[j]));
    cap = std::min(cap, Rational(1 / w.D[j]));
    w.a[j] = pow(Rational(1, 2), static_cast<unsigned>(j)) * cap;
    used += w.a[j] * w.C[j];
  }
  w.a[0] = (1 - used) / w.C[0];
  return w;
}

struct Builder {
  std::map<VertexId, VertexId> parent;
  std::map<VertexId, Rational> sq;
  std::map<VertexId, TailProfile> tails;

  void add_vertex(const VertexId& id, const VertexId& p, const Rational& w) {
    if (!parent.emplace(id, p).second) {
      throw Error(ErrorCode::VertexCollision, "vertex id '" + id + "' used twice", {id});
    }
    sq[id] = w;
  }

  // Copies `s` with ids renamed; its root hangs below `new_parent` with
  // squared weight `w` (or stays a root when new_parent is empty).
  void add_shift(const WeightedShift& s, const std::function<VertexId(const VertexId&)>& rename,
                 const VertexId& new_parent, const Rational& w) {
    const auto& f = s.forest();
    for (std::size_t i = 0; i < f.size(); ++i) {
      const VertexId id = rename(f.id(i));
      if (f.is_root(i)) {
        add_vertex(id, new_parent.empty() ? id : new_parent, w);
      } else {
        add_vertex(id, rename(f.id(f.parent(i))), s.sq(i));
      }
      if (const auto* t = s.tail(i)) tails[id] = *t;
    }
  }

  WeightedShift build(LeafPolicy policy = LeafPolicy::Forbid) const {
    std::vector<VertexId> vertices;
    for (const auto& [id, p] : parent) vertices.push_back(id);
    return WeightedShift(DirectedForest::from_parent_map(std::move(vertices), parent), sq, tails,
                         policy);
  }
};

// True when the given id sets overlap.
bool ids_overlap(const std::vector<std::vector<VertexId>>& groups) {
  std::set<VertexId> seen;
  for (const auto& g : groups) {
    for (const auto& id : g) {
      if (!seen.insert(id).second) return true;
    }
  }
  return false;
}

std::function<VertexId(const VertexId&)> member_renamer(bool prefix, std::size_t j) {
  if (!prefix) return [](const VertexId& id) { return id; };
  const std::string p = std::to_string(j) + ":";
  return [p](const VertexId& id) { return p + id; };
}

}  // namespace

SubnormalCert check_subnormal(const WeightedShift& s) {
  SubnormalCert cert{SubnormalVerdict::Subnormal, MeasureTable(s), std::nullopt, std::nullopt};
  if (auto bad = cert.table.first_local_failure()) {
    cert.verdict = SubnormalVerdict::NotSubnormal;
    cert.witness = bad;
    cert.excess = cert.table.at(*bad).excess;
  }
  return cert;
}

std::optional<Rational> backward_extension_feasible(const WeightedShift& s, unsigned k) {
  require_tree(s);
  auto cert = check_subnormal(s);
  if (!cert.holds()) {
    throw Error(ErrorCode::NotSubnormalInput, "shift is not subnormal",
                {s.label(*cert.witness)});
  }
  return neg_moment(cert.table.at(root_node(s)).mu, k);
}

BackwardExtension construct_backward_extension(const WeightedShift& s, unsigned k,
                                               std::optional<Rational> C) {
  if (k == 0) throw Error(ErrorCode::InvalidArgument, "extension length must be at least 1");
  auto C0 = backward_extension_feasible(s, k);
  const VertexId omega = tree_root(s.forest());
  if (!C0) {
    throw Error(ErrorCode::Infeasible,
                "the root measure has an atom at 0; no " + std::to_string(k) +
                    "-step subnormal backward extension exists",
                {omega});
  }
  const Rational c = C ? *C : Rational(1 / *C0);
  if (sgn(c) <= 0 || c * *C0 > 1) {
    throw Error(ErrorCode::ScaleOutOfRange,
                "C = " + to_string(c) + " lies outside (0, " + to_string(Rational(1 / *C0)) + "]");
  }

  MeasureTable table(s);
  auto ext = backward_extend_moments(table.at(root_node(s)).mu.scaled(c), k);
  ensure(ext.has_value(), "backward extension of the root measure failed");

  // a[i] = a_{i-k}; a[k] = a_0 = C.
  std::vector<Rational> a = ext->prefix;
  a.push_back(c);

  BackwardExtension out{s, {}, a};
  auto& plan = out.plan;
  plan.k = k;
  plan.C = c;
  plan.C0 = *C0;
  plan.chain_ids = backward_extension_ids(s.forest(), k);
  for (unsigned l = 0; l < k; ++l) plan.new_edge_sq.push_back(a[k - l] / a[k - l - 1]);

  auto sq = s.sq_map();
  sq[omega] = plan.new_edge_sq[0];
  for (unsigned l = 1; l < k; ++l) sq[plan.chain_ids[l - 1]] = plan.new_edge_sq[l];
  sq[plan.chain_ids[k - 1]] = 0;
  out.shift = WeightedShift(backward_extend_tree(s.forest(), k), sq, s.tails(), s.leaf_policy());

  ensure(check_subnormal(out.shift).holds(), "extended shift failed re-certification");
  const VertexId& top = plan.chain_ids[k - 1];
  for (unsigned j = 0; j <= k; ++j) {
    ensure(moment(out.shift, top, j) == a[j], "extended moment mismatch at order " +
                                                  std::to_string(j));
  }
  for (unsigned j = k + 1; j <= k + 3; ++j) {
    ensure(moment(out.shift, top, j) == c * moment(s, omega, j - k),
           "extended moment mismatch at order " + std::to_string(j));
  }
  ensure(restrict_shift(out.shift, omega) == s, "restriction does not recover the input");
  return out;
}

RootedSumExtension rooted_sum_extend(std::span<const WeightedShift> members, unsigned k) {
  if (members.empty()) throw Error(ErrorCode::EmptyFamily, "rooted sum of an empty family");
  std::vector<AtomicMeasure> mus;
  for (std::size_t j = 0; j < members.size(); ++j) mus.push_back(member_measure(members[j], j));
  auto w = rootsum_weights(mus, k);

  std::vector<std::vector<VertexId>> groups;
  for (const auto& m : members) groups.push_back(m.forest().vertices());
  const bool prefix = ids_overlap(groups);

  RootedSumExtension out{members[0], w.a, w.C, w.D, {}, {}};
  std::set<VertexId> taken;
  for (std::size_t j = 0; j < members.size(); ++j) {
    auto rename = member_renamer(prefix, j);
    for (const auto& id : members[j].forest().vertices()) taken.insert(rename(id));
    out.member_roots.push_back(rename(tree_root(members[j].forest())));
  }
  out.root = fresh_id("root", taken);

  Builder b;
  b.add_vertex(out.root, out.root, Rational(0));
  for (std::size_t j = 0; j < members.size(); ++j) {
    b.add_shift(members[j], member_renamer(prefix, j), out.root, w.a[j]);
  }
  out.shift = b.build(members[0].leaf_policy());

  Rational total = 0;
  Rational max_norm = 0;
  for (std::size_t j = 0; j < members.size(); ++j) {
    total += w.a[j] * w.C[j];
    max_norm = std::max(max_norm, shift_norm_sq(members[j]));
  }
  ensure(total == 1, "sum of a_j C_j differs from 1");
  ensure(check_subnormal(out.shift).holds(), "joint shift failed re-certification");
  ensure(backward_extension_feasible(out.shift, k).has_value(),
         "joint shift lacks the promised backward extension");
  ensure(shift_norm_sq(out.shift) == max_norm, "joint norm exceeds the family bound");
  return out;
}

DepthJoin join_at_depth(std::span<const WeightedShift> members, const DirectedForest& envelope,
                        unsigned k) {
  if (k == 0) throw Error(ErrorCode::InvalidArgument, "join depth must be at least 1");
  if (members.empty()) throw Error(ErrorCode::EmptyFamily, "join of an empty family");
  if (!is_tree(envelope)) {
    throw Error(ErrorCode::NotRootedTree, "envelope must be a single rooted tree");
  }
  DepthJoin out{members[0], {}};
  for (std::size_t v = 0; v < envelope.size(); ++v) {
    const auto d = envelope.depth(v);
    if (d > k || (d < k && envelope.degree(v) == 0)) {
      throw Error(ErrorCode::FrontierMismatch,
                  "envelope vertex '" + envelope.id(v) + "' at depth " + std::to_string(d) +
                      " does not lead to depth " + std::to_string(k),
                  {envelope.id(v)});
    }
    if (d == k) out.frontier.push_back(envelope.id(v));
  }
  if (out.frontier.size() != members.size()) {
    throw Error(ErrorCode::FrontierMismatch,
                "envelope has " + std::to_string(out.frontier.size()) + " frontier vertices for " +
                    std::to_string(members.size()) + " members");
  }

  for (std::size_t j = 0; j < members.size(); ++j) {
    if (!neg_moment(member_measure(members[j], j), k)) {
      throw Error(ErrorCode::MemberInfeasible,
                  "member " + std::to_string(j) + " has no " + std::to_string(k) +
                      "-step subnormal backward extension",
                  {std::to_string(j)});
    }
  }

  std::vector<std::vector<VertexId>> groups{envelope.vertices()};
  for (const auto& m : members) {
    groups.emplace_back();
    for (const auto& id : m.forest().vertices()) {
      if (id != tree_root(m.forest())) groups.back().push_back(id);
    }
  }
  const bool prefix = ids_overlap(groups);

  // Shift on Des(u) for every envelope vertex u, built from the frontier up.
  std::map<std::size_t, WeightedShift> built;
  for (std::size_t j = 0; j < members.size(); ++j) {
    const VertexId root = tree_root(members[j].forest());
    const VertexId slot = out.frontier[j];
    auto base = member_renamer(prefix, j);
    Builder b;
    b.add_shift(members[j], [&](const VertexId& id) { return id == root ? slot : base(id); }, "",
                Rational(0));
    built.emplace(envelope.index(slot), b.build(members[j].leaf_policy()));
  }
  for (unsigned d = k; d-- > 0;) {
    for (std::size_t u = 0; u < envelope.size(); ++u) {
      if (envelope.depth(u) != d) continue;
      const auto kids = envelope.children(u);
      std::vector<AtomicMeasure> mus;
      for (auto c : kids) {
        const auto& part = built.at(c);
        auto cert = check_subnormal(part);
        ensure(cert.holds(), "intermediate join is not subnormal");
        mus.push_back(cert.table.at(root_node(part)).mu);
      }
      RootSumWeights w;
      try {
        w = rootsum_weights(mus, d);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::MemberInfeasible) throw;
        ensure(false, "intermediate join lost its backward extension");
      }
      Builder b;
      b.add_vertex(envelope.id(u), envelope.id(u), Rational(0));
      for (std::size_t i = 0; i < kids.size(); ++i) {
        b.add_shift(built.at(kids[i]), [](const VertexId& id) { return id; }, envelope.id(u),
                    w.a[i]);
      }
      built.emplace(u, b.build(members[0].leaf_policy()));
      for (auto c : kids) built.erase(c);
    }
  }
  out.shift = built.at(envelope.index(tree_root(envelope)));
  ensure(check_subnormal(out.shift).holds(), "joined shift failed re-certification");
  return out;
}

WeightedShift one_step_extension(const WeightedShift& s, const Rational& sq) {
  require_tree(s);
  if (sgn(sq) <= 0) {
    throw Error(ErrorCode::InvalidArgument, "extension weight must be positive");
  }
  const auto top = backward_extension_ids(s.forest(), 1).front();
  auto weights = s.sq_map();
  weights[tree_root(s.forest())] = sq;
  weights[top] = 0;
  return WeightedShift(backward_extend_tree(s.forest(), 1), weights, s.tails(), s.leaf_policy());
}

PowerHypoJoin powerhypo_rooted_sum_extend(std::span<const WeightedShift> members,
                                          std::span<const Rational> ext_sq, unsigned k_max) {
  if (members.empty()) throw Error(ErrorCode::EmptyFamily, "rooted sum of an empty family");
  if (ext_sq.size() != members.size()) {
    throw Error(ErrorCode::InvalidArgument, "one extension weight per member is required");
  }
  std::vector<WeightedShift> extended;
  for (std::size_t j = 0; j < members.size(); ++j) {
    require_tree(members[j], j);
    extended.push_back(one_step_extension(members[j], ext_sq[j]));
    auto report = check_power_hyponormal<Rational>(extended.back(), k_max);
    if (!report.holds()) {
      const auto* bad = report.first_failure();
      throw Error(ErrorCode::MemberNotExtendable,
                  "the 1-step extension of member " + std::to_string(j) + " fails at k = " +
                      std::to_string(bad->k) + " (" + std::string(to_string(bad->verdict)) + ")",
                  {std::to_string(j)});
    }
  }

  std::vector<std::vector<VertexId>> groups;
  for (const auto& m : members) groups.push_back(m.forest().vertices());
  const bool prefix = ids_overlap(groups);

  PowerHypoJoin out{members[0], {}, {}, {}, {}};
  std::set<VertexId> taken;
  for (std::size_t j = 0; j < members.size(); ++j) {
    auto rename = member_renamer(prefix, j);
    for (const auto& id : members[j].forest().vertices()) taken.insert(rename(id));
    out.member_roots.push_back(rename(tree_root(members[j].forest())));
    out.a_sq.push_back(pow(Rational(1, 2), static_cast<unsigned>(j + 2)) /
                       std::max(Rational(1), ext_sq[j]));
    out.theta_sq.push_back(out.a_sq.back() * ext_sq[j]);
  }
  out.root = fresh_id("root", taken);

  Builder b;
  b.add_vertex(out.root, out.root, Rational(0));
  for (std::size_t j = 0; j < members.size(); ++j) {
    b.add_shift(members[j], member_renamer(prefix, j), out.root, out.theta_sq[j]);
  }
  out.shift = b.build(members[0].leaf_policy());

  for (unsigned k = 1; k <= k_max; ++k) {
    Rational expected = 0;
    for (std::size_t j = 0; j < members.size(); ++j) {
      expected += out.a_sq[j] * hip_k<Rational>(extended[j], root_node(extended[j]), k);
    }
    const Rational actual = hip_k(out.shift, out.root, k);
    ensure(actual == expected && actual <= 1,
           "hip_" + std::to_string(k) + " at the joint root breaks the mixture identity");
  }
  ensure(check_power_hyponormal<Rational>(out.shift, k_max).holds(),
         "joint shift failed the power hyponormality re-check");
  return out;
}

}  // namespace shiftlab
