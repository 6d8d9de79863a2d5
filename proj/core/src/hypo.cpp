#include "shiftlab/hypo.hpp"

#include <algorithm>
#include <cmath>

#include "scalar_ops.hpp"
#include "shiftlab/error.hpp"
#include "shiftlab/psd.hpp"

namespace shiftlab {

using detail::ScalarOps;

std::string_view to_string(HypoVerdict v) {
  switch (v) {
    case HypoVerdict::Hyponormal: return "Hyponormal";
    case HypoVerdict::NotHyponormal: return "NotHyponormal";
    case HypoVerdict::LeafObstruction: return "LeafObstruction";
  }
  return "Unknown";
}

namespace {

// chi_k(x) together with |lambda_u^(k)|^2 for each member u.
template <class Scalar>
std::vector<std::pair<Node, Scalar>> kth_children(const WeightedShift& s, const Node& x,
                                                  unsigned k) {
  std::vector<std::pair<Node, Scalar>> level{{x, Scalar(1)}};
  std::vector<std::pair<Node, Scalar>> next;
  for (unsigned step = 0; step < k && !level.empty(); ++step) {
    next.clear();
    for (const auto& [node, w] : level) {
      for (const auto& c : s.children(node)) {
        next.emplace_back(c, w * ScalarOps<Scalar>::from(s.edge_sq(c)));
      }
    }
    level.swap(next);
  }
  return level;
}

template <class Scalar>
Scalar hip_from(const WeightedShift& s, const MomentTable<Scalar>& m, const Node& x, unsigned k) {
  Scalar sum = 0;
  for (const auto& [u, w] : kth_children<Scalar>(s, x, k)) {
    Scalar norm = m.at(u, k);
    if (ScalarOps<Scalar>::is_zero(norm)) {
      throw Error(ErrorCode::HasLeaf,
                  "||S^k e_u|| vanishes at '" + s.label(u) + "'", {s.label(u)});
    }
    sum += w / norm;
  }
  return sum;
}

void require_proper(const WeightedShift& s) {
  if (auto z = s.first_zero_weight()) {
    const auto& id = s.forest().id(*z);
    throw Error(ErrorCode::NotProper, "non-root vertex '" + id + "' has weight 0", {id});
  }
}

template <class Scalar>
bool exceeds_one(const Scalar& value, double tol) {
  if constexpr (std::is_same_v<Scalar, Rational>) {
    return value > 1;
  } else {
    return value > 1.0 + tol;
  }
}

}  // namespace

template <class Scalar>
Scalar hip_k(const WeightedShift& s, const Node& x, unsigned k) {
  if (k == 0) throw Error(ErrorCode::InvalidArgument, "hip_k requires k >= 1");
  require_proper(s);
  MomentTable<Scalar> m(s, k);
  return hip_from(s, m, x, k);
}

template Rational hip_k(const WeightedShift&, const Node&, unsigned);
template double hip_k(const WeightedShift&, const Node&, unsigned);

Rational hip_k(const WeightedShift& s, std::string_view label, unsigned k) {
  return hip_k<Rational>(s, s.node(label), k);
}

std::vector<Node> checked_positions(const WeightedShift& s, unsigned k) {
  std::vector<Node> out;
  const auto& f = s.forest();
  for (std::size_t i = 0; i < f.size(); ++i) out.push_back(Node{i, 0});
  // Beyond the prefix every window of k edges and every k-step norm is
  // c^k, so hip_k = 1 there; len + 2k positions cover the transition.
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (const auto* t = s.tail(i)) {
      const std::size_t last = t->prefix_sq.size() + 2 * static_cast<std::size_t>(k);
      for (std::size_t d = 1; d <= last; ++d) out.push_back(Node{i, d});
    }
  }
  return out;
}

template <class Scalar>
BasicHipReport<Scalar> check_hyponormal_power(const WeightedShift& s, unsigned k, double tol) {
  if (k == 0) throw Error(ErrorCode::InvalidArgument, "k must be at least 1");
  require_proper(s);
  BasicHipReport<Scalar> report;
  report.k = k;
  const auto& f = s.forest();

  // Leaves of the k-th power: non-roots there (depth >= k) without k-th children.
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (f.depth(i) < k) continue;
    if (kth_children<Rational>(s, Node{i, 0}, k).empty()) {
      report.verdict = HypoVerdict::LeafObstruction;
      report.witness = f.id(i);
      return report;
    }
  }

  MomentTable<Scalar> m(s, k);
  for (const auto& x : checked_positions(s, k)) {
    Scalar value = hip_from(s, m, x, k);
    if (report.witness.empty() && exceeds_one(value, tol)) {
      report.verdict = HypoVerdict::NotHyponormal;
      report.witness = s.label(x);
    }
    report.values.push_back({x, s.label(x), std::move(value)});
  }
  return report;
}

template HipReport check_hyponormal_power(const WeightedShift&, unsigned, double);
template FloatHipReport check_hyponormal_power(const WeightedShift&, unsigned, double);

template <class Scalar>
bool BasicPowerHypoReport<Scalar>::holds() const {
  return first_failure() == nullptr;
}

template <class Scalar>
const BasicHipReport<Scalar>* BasicPowerHypoReport<Scalar>::first_failure() const {
  for (const auto& r : reports) {
    if (!r.holds()) return &r;
  }
  return nullptr;
}

template struct BasicPowerHypoReport<Rational>;
template struct BasicPowerHypoReport<double>;

bool is_forkless(const WeightedShift& s) {
  const auto tailed = s.tailed_vertices();
  for (const auto& component : components(s.forest())) {
    std::set<VertexId> local;
    for (const auto& id : component.vertices()) {
      if (tailed.contains(id)) local.insert(id);
    }
    if (classify_forkless(component, local).kind != ForestClassification::Kind::NArmStar) {
      return false;
    }
  }
  return true;
}

template <class Scalar>
BasicPowerHypoReport<Scalar> check_power_hyponormal(const WeightedShift& s, unsigned k_max,
                                                    double tol) {
  BasicPowerHypoReport<Scalar> out;
  out.forkless = is_forkless(s);
  for (unsigned k = 1; k <= k_max; ++k) {
    out.reports.push_back(check_hyponormal_power<Scalar>(s, k, tol));
  }
  return out;
}

template PowerHypoReport check_power_hyponormal(const WeightedShift&, unsigned, double);
template FloatPowerHypoReport check_power_hyponormal(const WeightedShift&, unsigned, double);

bool psd_oracle(const WeightedShift& s, const Node& x, unsigned k) {
  require_proper(s);
  MomentTable<Rational> m(s, k);
  auto kids = kth_children<Rational>(s, x, k);
  const std::size_t n = kids.size();
  RationalMatrix a(n, std::vector<Rational>(n, Rational(-1)));
  for (std::size_t i = 0; i < n; ++i) a[i][i] = m.at(kids[i].first, k) / kids[i].second - 1;
  return is_psd(std::move(a));
}

bool psd_oracle_float(const WeightedShift& s, const Node& x, unsigned k, double tol) {
  require_proper(s);
  MomentTable<double> m(s, k);
  auto kids = kth_children<double>(s, x, k);
  const std::size_t n = kids.size();
  std::vector<std::vector<double>> a(n, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      a[i][j] = -std::sqrt(kids[i].second * kids[j].second);
    }
    a[i][i] += m.at(kids[i].first, k);
  }
  return is_psd(a, tol);
}

Counterexample make_counterexample(const DirectedForest& tree, const std::set<VertexId>& tailed,
                                   std::optional<VertexId> v1_opt) {
  if (!is_tree(tree)) throw Error(ErrorCode::NotATree, "counterexample input must be one tree");
  for (const auto& id : tailed) {
    if (tree.degree(tree.index(id)) != 0) {
      throw Error(ErrorCode::InvalidTail, "tail attached to '" + id + "', which has children", {id});
    }
  }
  for (std::size_t v = 0; v < tree.size(); ++v) {
    if (tree.is_leaf(v) && !tailed.contains(tree.id(v))) {
      throw Error(ErrorCode::HasLeaf, "vertex '" + tree.id(v) + "' is a leaf", {tree.id(v)});
    }
  }
  if (classify_forkless(tree, tailed).kind == ForestClassification::Kind::NArmStar) {
    throw Error(ErrorCode::ForklessInput, "the tree is forkless; every hyponormal shift on it is "
                                          "power hyponormal");
  }

  std::size_t v1 = tree.size();
  if (v1_opt) {
    v1 = tree.index(*v1_opt);
    if (tree.is_root(v1)) {
      throw Error(ErrorCode::RootFork, "v1 must not be a root", {*v1_opt});
    }
    if (tree.degree(v1) < 2) {
      throw Error(ErrorCode::InvalidArgument, "v1 must have at least two children", {*v1_opt});
    }
  } else {
    for (std::size_t v = 0; v < tree.size(); ++v) {
      if (!tree.is_root(v) && tree.degree(v) >= 2) {
        v1 = v;
        break;
      }
    }
  }
  const std::size_t v0 = tree.parent(v1);
  const auto v1_kids = tree.children(v1);
  const std::size_t v2 = *std::min_element(v1_kids.begin(), v1_kids.end());
  const std::size_t c2_count = v1_kids.size() - 1;
  const std::size_t c1_count = tree.degree(v0) - 1;
  const Rational beta = c1_count == 0 ? Rational(0) : Rational(1, 2);

  std::vector<bool> below_v2(tree.size(), false);
  for (auto u : descendant_indices(tree, v2)) below_v2[u] = true;

  std::map<VertexId, Rational> sq;
  std::map<VertexId, TailProfile> tails;
  for (std::size_t v = 0; v < tree.size(); ++v) {
    if (tree.is_root(v)) sq[tree.id(v)] = 0;
    const Rational target = below_v2[v] ? Rational(2) : Rational(1);
    const auto kids = tree.children(v);
    if (v == v0) {
      for (auto c : kids) {
        sq[tree.id(c)] = c == v1 ? Rational(Rational(4, 3) * (1 - beta)) : Rational(beta / c1_count);
      }
    } else if (v == v1) {
      for (auto c : kids) {
        sq[tree.id(c)] = c == v2 ? Rational(2, 3) : Rational(Rational(2, 3) / c2_count);
      }
    } else {
      for (auto c : kids) sq[tree.id(c)] = target / static_cast<unsigned long>(kids.size());
    }
    if (tailed.contains(tree.id(v))) tails[tree.id(v)] = TailProfile{{}, target};
  }

  return Counterexample{WeightedShift(tree, sq, std::move(tails)),
                        tree.id(v0),
                        tree.id(v1),
                        tree.id(v2),
                        beta,
                        Rational((10 - beta) / 9)};
}

}  // namespace shiftlab
