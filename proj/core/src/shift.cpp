#include "shiftlab/shift.hpp"

#include <algorithm>

#include "scalar_ops.hpp"
#include "shiftlab/error.hpp"

namespace shiftlab {

using detail::ScalarOps;

const Rational& TailProfile::edge_sq(std::size_t depth) const {
  return depth <= prefix_sq.size() ? prefix_sq[depth - 1] : constant_sq;
}

Rational TailProfile::product(std::size_t d, std::size_t n) const {
  Rational out = 1;
  std::size_t i = d + 1;
  for (; i <= d + n && i <= prefix_sq.size(); ++i) out *= prefix_sq[i - 1];
  if (i <= d + n) out *= pow(constant_sq, static_cast<unsigned>(d + n - i + 1));
  return out;
}

WeightedShift::WeightedShift(DirectedForest forest, const std::map<VertexId, Rational>& sq,
                             std::map<VertexId, TailProfile> tails, LeafPolicy leaves)
    : forest_(std::move(forest)), tails_(std::move(tails)), leaves_(leaves) {
  const std::size_t n = forest_.size();
  sq_.assign(n, Rational(0));
  for (const auto& [id, value] : sq) {
    auto i = forest_.find(id);
    if (!i) {
      throw Error(ErrorCode::UnknownVertex, "weight given for unknown vertex '" + id + "'", {id});
    }
    if (sgn(value) < 0) {
      throw Error(ErrorCode::InvalidWeights,
                  "squared weight of '" + id + "' is negative", {id});
    }
    if (forest_.is_root(*i) && !is_zero(value)) {
      throw Error(ErrorCode::InvalidWeights,
                  "root '" + id + "' must carry weight 0", {id});
    }
    sq_[*i] = value;
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!forest_.is_root(i) && !sq.contains(forest_.id(i))) {
      throw Error(ErrorCode::InvalidWeights,
                  "no weight given for vertex '" + forest_.id(i) + "'", {forest_.id(i)});
    }
  }
  tail_at_.assign(n, std::nullopt);
  for (const auto& [id, t] : tails_) {
    auto i = forest_.find(id);
    if (!i) {
      throw Error(ErrorCode::UnknownVertex, "tail attached to unknown vertex '" + id + "'", {id});
    }
    if (forest_.degree(*i) != 0) {
      throw Error(ErrorCode::InvalidTail,
                  "tail attached to '" + id + "', which has children", {id});
    }
    if (!is_positive(t.constant_sq) ||
        std::any_of(t.prefix_sq.begin(), t.prefix_sq.end(),
                    [](const Rational& x) { return !is_positive(x); })) {
      throw Error(ErrorCode::InvalidTail,
                  "tail weights of '" + id + "' must be positive", {id});
    }
    tail_at_[*i] = t;
  }
  if (leaves_ == LeafPolicy::Forbid) {
    if (auto leaf = first_leaf()) {
      throw Error(ErrorCode::HasLeaf,
                  "vertex '" + forest_.id(*leaf) + "' is a leaf without a tail",
                  {forest_.id(*leaf)});
    }
  }
}

std::map<VertexId, Rational> WeightedShift::sq_map() const {
  std::map<VertexId, Rational> out;
  for (std::size_t i = 0; i < sq_.size(); ++i) out.emplace(forest_.id(i), sq_[i]);
  return out;
}

const TailProfile* WeightedShift::tail(std::size_t i) const {
  return tail_at_[i] ? &*tail_at_[i] : nullptr;
}

std::set<VertexId> WeightedShift::tailed_vertices() const {
  std::set<VertexId> out;
  for (const auto& [id, t] : tails_) out.insert(id);
  return out;
}

bool WeightedShift::is_proper() const { return !first_zero_weight().has_value(); }

std::optional<std::size_t> WeightedShift::first_zero_weight() const {
  for (std::size_t i = 0; i < sq_.size(); ++i) {
    if (!forest_.is_root(i) && is_zero(sq_[i])) return i;
  }
  return std::nullopt;
}

std::optional<std::size_t> WeightedShift::first_leaf() const {
  for (std::size_t i = 0; i < sq_.size(); ++i) {
    if (forest_.is_leaf(i) && !tail_at_[i]) return i;
  }
  return std::nullopt;
}

const Rational& WeightedShift::edge_sq(const Node& n) const {
  if (n.depth == 0) return sq_[n.core];
  return tail_at_[n.core]->edge_sq(n.depth);
}

std::vector<Node> WeightedShift::children(const Node& n) const {
  if (n.depth > 0 || tail_at_[n.core]) return {Node{n.core, n.depth + 1}};
  std::vector<Node> out;
  for (auto c : forest_.children(n.core)) out.push_back(Node{c, 0});
  return out;
}

std::optional<Node> WeightedShift::parent(const Node& n) const {
  if (n.depth > 0) return Node{n.core, n.depth - 1};
  if (forest_.is_root(n.core)) return std::nullopt;
  return Node{forest_.parent(n.core), 0};
}

std::string WeightedShift::label(const Node& n) const {
  if (n.depth == 0) return forest_.id(n.core);
  return forest_.id(n.core) + "#" + std::to_string(n.depth);
}

Node WeightedShift::node(std::string_view label) const {
  auto hash = label.rfind('#');
  if (hash == std::string_view::npos) return Node{forest_.index(label), 0};
  auto core = forest_.index(label.substr(0, hash));
  std::string_view digits = label.substr(hash + 1);
  std::size_t depth = 0;
  bool ok = !digits.empty();
  for (char c : digits) {
    if (c < '0' || c > '9') ok = false;
    else depth = depth * 10 + static_cast<std::size_t>(c - '0');
  }
  if (!ok || depth == 0 || !tail_at_[core]) {
    throw Error(ErrorCode::UnknownVertex, "unknown position '" + std::string(label) + "'",
                {std::string(label)});
  }
  return Node{core, depth};
}

Rational child_sq_sum(const WeightedShift& s, const Node& n) {
  Rational sum = 0;
  for (const auto& c : s.children(n)) sum += s.edge_sq(c);
  return sum;
}

Rational shift_norm_sq(const WeightedShift& s) {
  Rational best = 0;
  for (std::size_t i = 0; i < s.forest().size(); ++i) {
    best = std::max(best, child_sq_sum(s, Node{i, 0}));
    if (const auto* t = s.tail(i)) {
      for (std::size_t d = 1; d < t->prefix_sq.size(); ++d) best = std::max(best, t->prefix_sq[d]);
      best = std::max(best, t->constant_sq);
    }
  }
  return best;
}

namespace {

template <class Scalar>
void drop_zeros(ShiftVector<Scalar>& v) {
  std::erase_if(v, [](const auto& kv) { return ScalarOps<Scalar>::is_zero(kv.second); });
}

}  // namespace

template <class Scalar>
ShiftVector<Scalar> apply(const WeightedShift& s, const ShiftVector<Scalar>& f) {
  ShiftVector<Scalar> out;
  for (const auto& [x, value] : f) {
    for (const auto& c : s.children(x)) {
      out[c] += ScalarOps<Scalar>::sqrt_of(s.edge_sq(c)) * value;
    }
  }
  drop_zeros(out);
  return out;
}

template <class Scalar>
ShiftVector<Scalar> apply_adjoint(const WeightedShift& s, const ShiftVector<Scalar>& f) {
  ShiftVector<Scalar> out;
  for (const auto& [x, value] : f) {
    auto p = s.parent(x);
    if (!p) continue;
    out[*p] += ScalarOps<Scalar>::sqrt_of(s.edge_sq(x)) * value;
  }
  drop_zeros(out);
  return out;
}

template ShiftVector<double> apply(const WeightedShift&, const ShiftVector<double>&);
template ShiftVector<Surd> apply(const WeightedShift&, const ShiftVector<Surd>&);
template ShiftVector<double> apply_adjoint(const WeightedShift&, const ShiftVector<double>&);
template ShiftVector<Surd> apply_adjoint(const WeightedShift&, const ShiftVector<Surd>&);

Node PoweredShift::original(const WeightedShift& base, const Node& n) const {
  const auto& id = shift.forest().id(n.core);
  if (auto it = origin.find(id); it != origin.end()) {
    return Node{it->second.core, it->second.depth + n.depth * k};
  }
  return Node{base.forest().index(id), n.depth};
}

PoweredShift power_weights(const WeightedShift& s, unsigned k) {
  if (k == 0) throw Error(ErrorCode::InvalidArgument, "power_weights requires k >= 1");
  const auto& f = s.forest();

  // Materialise tail positions 1..k below each tailed vertex.
  auto parent = f.parent_map();
  std::map<VertexId, Rational> edge;
  std::map<VertexId, Node> origin;
  std::set<VertexId> taken(f.vertices().begin(), f.vertices().end());
  for (std::size_t i = 0; i < f.size(); ++i) edge[f.id(i)] = s.sq(i);
  for (const auto& [leaf, t] : s.tails()) {
    VertexId above = leaf;
    for (unsigned j = 1; j <= k; ++j) {
      auto id = fresh_id(leaf + "~" + std::to_string(j), taken);
      taken.insert(id);
      parent[id] = above;
      edge[id] = t.edge_sq(j);
      origin[id] = Node{f.index(leaf), j};
      above = id;
    }
  }
  auto extended = DirectedForest::from_parent_map(parent);
  auto powered = power_k(extended, k);

  std::map<VertexId, Rational> sq;
  for (std::size_t x = 0; x < extended.size(); ++x) {
    const auto& id = extended.id(x);
    if (powered.is_root(powered.index(id))) {
      sq[id] = 0;
      continue;
    }
    Rational product = 1;
    std::size_t y = x;
    for (unsigned j = 0; j < k; ++j) {
      product *= edge[extended.id(y)];
      y = extended.parent(y);
    }
    sq[id] = product;
  }

  std::map<VertexId, TailProfile> tails;
  for (const auto& [id, pos] : origin) {
    const auto& t = *s.tail(pos.core);
    const std::size_t len = t.prefix_sq.size();
    const std::size_t j = pos.depth;
    TailProfile pt;
    pt.constant_sq = pow(t.constant_sq, k);
    for (std::size_t m = 1; j + (m - 1) * k + 1 <= len; ++m) {
      pt.prefix_sq.push_back(t.product(j + (m - 1) * k, k));
    }
    tails[id] = std::move(pt);
  }
  return PoweredShift{WeightedShift(std::move(powered), sq, std::move(tails), LeafPolicy::Allow),
                      std::move(origin), k};
}

WeightedShift make_proper(const WeightedShift& s) {
  auto parent = s.forest().parent_map();
  auto sq = s.sq_map();
  for (auto& [v, p] : parent) {
    if (is_zero(sq[v])) p = v;
  }
  return WeightedShift(DirectedForest::from_parent_map(parent), sq, s.tails(),
                       LeafPolicy::Allow);
}

WeightedShift make_isometric(const DirectedForest& tree, const std::set<VertexId>& tailed) {
  if (!is_tree(tree)) throw Error(ErrorCode::NotATree, "make_isometric expects a single tree");
  std::map<VertexId, Rational> sq;
  std::map<VertexId, TailProfile> tails;
  for (std::size_t v = 0; v < tree.size(); ++v) {
    if (tree.is_root(v)) sq[tree.id(v)] = 0;
    const auto kids = tree.children(v);
    for (auto c : kids) sq[tree.id(c)] = Rational(1, kids.size());
  }
  for (const auto& id : tailed) tails[id] = TailProfile{{}, Rational(1)};
  return WeightedShift(tree, sq, std::move(tails));
}

WeightedShift restrict_shift(const WeightedShift& s, std::string_view v) {
  auto sub = des_subtree(s.forest(), v);
  std::map<VertexId, Rational> sq;
  std::map<VertexId, TailProfile> tails;
  for (const auto& id : sub.vertices()) {
    sq[id] = id == v ? Rational(0) : s.sq(id);
    if (auto it = s.tails().find(id); it != s.tails().end()) tails.insert(*it);
  }
  return WeightedShift(std::move(sub), sq, std::move(tails), s.leaf_policy());
}

namespace {

template <class Scalar>
Scalar tail_product(const TailProfile& t, std::size_t d, std::size_t n) {
  if constexpr (std::is_same_v<Scalar, Rational>) {
    return t.product(d, n);
  } else {
    Scalar out = 1;
    std::size_t i = d + 1;
    for (; i <= d + n && i <= t.prefix_sq.size(); ++i) out *= ScalarOps<Scalar>::from(t.prefix_sq[i - 1]);
    if (i <= d + n) {
      out *= std::pow(ScalarOps<Scalar>::from(t.constant_sq), static_cast<double>(d + n - i + 1));
    }
    return out;
  }
}

}  // namespace

template <class Scalar>
MomentTable<Scalar>::MomentTable(const WeightedShift& s, unsigned n_max) : n_max_(n_max) {
  const auto& f = s.forest();
  const std::size_t size = f.size();
  tails_.resize(size);
  for (std::size_t i = 0; i < size; ++i) {
    if (const auto* t = s.tail(i)) tails_[i] = *t;
  }
  std::vector<Scalar> weight(size);
  for (std::size_t i = 0; i < size; ++i) weight[i] = ScalarOps<Scalar>::from(s.sq(i));

  m_.assign(n_max + 1, std::vector<Scalar>(size, Scalar(0)));
  for (std::size_t i = 0; i < size; ++i) m_[0][i] = 1;
  for (unsigned n = 1; n <= n_max; ++n) {
    for (std::size_t i = 0; i < size; ++i) {
      if (tails_[i]) {
        m_[n][i] = tail_product<Scalar>(*tails_[i], 0, n);
        continue;
      }
      Scalar sum = 0;
      for (auto c : f.children(i)) sum += weight[c] * m_[n - 1][c];
      m_[n][i] = sum;
    }
  }
}

template <class Scalar>
Scalar MomentTable<Scalar>::at(const Node& x, unsigned n) const {
  if (x.depth == 0) return m_.at(n)[x.core];
  return tail_product<Scalar>(*tails_[x.core], x.depth, n);
}

template class MomentTable<Rational>;
template class MomentTable<double>;

namespace {

void require_proper_leafless(const WeightedShift& s) {
  if (auto z = s.first_zero_weight()) {
    const auto& id = s.forest().id(*z);
    throw Error(ErrorCode::NotProper, "non-root vertex '" + id + "' has weight 0", {id});
  }
  if (auto leaf = s.first_leaf()) {
    const auto& id = s.forest().id(*leaf);
    throw Error(ErrorCode::HasLeaf, "vertex '" + id + "' is a leaf", {id});
  }
}

}  // namespace

Rational moment(const WeightedShift& s, std::string_view v, unsigned n) {
  require_proper_leafless(s);
  auto x = s.node(v);
  MomentTable<Rational> table(s, x.depth == 0 ? n : 0);
  return table.at(x, n);
}

std::string_view to_string(NodeMeasure::Status status) {
  switch (status) {
    case NodeMeasure::Status::Feasible: return "Feasible";
    case NodeMeasure::Status::MassExceeds: return "MassExceeds";
    case NodeMeasure::Status::AtomAtZero: return "AtomAtZero";
    case NodeMeasure::Status::ChildInfeasible: return "ChildInfeasible";
  }
  return "Unknown";
}

namespace {

// One step of the backward recursion: mu = t^-1 rho + (1 - int t^-1 drho) delta_0.
NodeMeasure lift(const AtomicMeasure& rho, bool children_feasible) {
  NodeMeasure out;
  if (!children_feasible) {
    out.status = NodeMeasure::Status::ChildInfeasible;
    return out;
  }
  auto neg = neg_moment(rho, 1);
  if (!neg) {
    out.status = NodeMeasure::Status::AtomAtZero;
    return out;
  }
  if (*neg > 1) {
    out.status = NodeMeasure::Status::MassExceeds;
    out.mu = rho.divided_by_power(1);
    out.excess = *neg - 1;
    return out;
  }
  out.defect = 1 - *neg;
  auto atoms = rho.divided_by_power(1).atoms();
  atoms.push_back({Rational(0), out.defect});
  out.mu = AtomicMeasure::from_atoms(std::move(atoms));
  return out;
}

bool feasible(const NodeMeasure& m) { return m.status == NodeMeasure::Status::Feasible; }

}  // namespace

MeasureTable::MeasureTable(const WeightedShift& s) {
  require_proper_leafless(s);
  const auto& f = s.forest();
  const std::size_t n = f.size();
  core_.resize(n);
  tail_.resize(n);
  deep_.resize(n);

  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return f.depth(a) > f.depth(b); });

  for (auto i : order) {
    if (const auto* t = s.tail(i)) {
      const std::size_t len = t->prefix_sq.size();
      deep_[i].mu = AtomicMeasure::dirac(t->constant_sq);
      // Position d has child edge d+1; positions d >= len see only the
      // constant and carry delta_c, so only 1..len-1 are stored.
      tail_[i].resize(len > 0 ? len - 1 : 0);
      for (std::size_t d = std::max<std::size_t>(len, 1); d-- > 0;) {
        const NodeMeasure& below = d + 1 >= len ? deep_[i] : tail_[i][d];
        NodeMeasure m = lift(below.mu.scaled(t->edge_sq(d + 1)), feasible(below));
        if (d == 0) {
          core_[i] = std::move(m);
        } else {
          tail_[i][d - 1] = std::move(m);
        }
      }
      continue;
    }
    std::vector<std::pair<Rational, AtomicMeasure>> parts;
    bool ok = true;
    for (auto c : f.children(i)) {
      ok = ok && feasible(core_[c]);
      parts.emplace_back(s.sq(c), core_[c].mu);
    }
    core_[i] = lift(ok ? mixture(parts) : AtomicMeasure{}, ok);
  }
}

const NodeMeasure& MeasureTable::at(const Node& x) const {
  if (x.depth == 0) return core_.at(x.core);
  const auto& chain = tail_.at(x.core);
  if (x.depth <= chain.size()) return chain[x.depth - 1];
  return deep_.at(x.core);
}

std::vector<Node> MeasureTable::nodes() const {
  std::vector<Node> out;
  for (std::size_t i = 0; i < core_.size(); ++i) out.push_back(Node{i, 0});
  for (std::size_t i = 0; i < tail_.size(); ++i) {
    for (std::size_t d = 1; d <= tail_[i].size(); ++d) out.push_back(Node{i, d});
  }
  return out;
}

std::optional<Node> MeasureTable::first_local_failure() const {
  for (const auto& x : nodes()) {
    if (at(x).locally_infeasible()) return x;
  }
  return std::nullopt;
}

bool MeasureTable::all_feasible() const {
  for (const auto& x : nodes()) {
    if (!feasible(at(x))) return false;
  }
  return true;
}

NodeMeasure vertex_measure(const WeightedShift& s, std::string_view v) {
  MeasureTable table(s);
  return table.at(s.node(v));
}

}  // namespace shiftlab
