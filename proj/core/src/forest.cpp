#include "shiftlab/forest.hpp"

#include <algorithm>
#include <numeric>

#include "shiftlab/error.hpp"

namespace shiftlab {

namespace {

void check_id(const VertexId& id) {
  if (id.empty()) {
    throw Error(ErrorCode::InvalidVertexId, "vertex id must be nonempty");
  }
  if (id.find('#') != VertexId::npos) {
    throw Error(ErrorCode::InvalidVertexId,
                "vertex id '" + id + "' contains reserved character '#'", {id});
  }
}

}  // namespace

DirectedForest DirectedForest::from_parent_map(const std::map<VertexId, VertexId>& parent) {
  std::vector<VertexId> vertices;
  vertices.reserve(parent.size());
  for (const auto& [v, p] : parent) vertices.push_back(v);
  return from_parent_map(std::move(vertices), parent);
}

DirectedForest DirectedForest::from_parent_map(std::vector<VertexId> vertices,
                                               const std::map<VertexId, VertexId>& parent) {
  if (vertices.empty()) {
    throw Error(ErrorCode::EmptyVertexSet, "a directed forest needs at least one vertex");
  }
  std::sort(vertices.begin(), vertices.end());
  if (auto dup = std::adjacent_find(vertices.begin(), vertices.end()); dup != vertices.end()) {
    throw Error(ErrorCode::InvalidVertexId, "duplicate vertex id '" + *dup + "'", {*dup});
  }
  for (const auto& v : vertices) check_id(v);

  DirectedForest f;
  f.ids_ = std::move(vertices);
  const std::size_t n = f.ids_.size();
  f.parent_.assign(n, 0);

  for (const auto& [child, par] : parent) {
    if (!f.find(child)) {
      throw Error(ErrorCode::DanglingParent,
                  "parent map mentions unknown vertex '" + child + "'", {child});
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    auto it = parent.find(f.ids_[i]);
    if (it == parent.end()) {
      throw Error(ErrorCode::DanglingParent,
                  "vertex '" + f.ids_[i] + "' has no parent entry", {f.ids_[i]});
    }
    auto p = f.find(it->second);
    if (!p) {
      throw Error(ErrorCode::DanglingParent,
                  "parent '" + it->second + "' of '" + f.ids_[i] + "' is not a vertex",
                  {f.ids_[i], it->second});
    }
    f.parent_[i] = *p;
  }

  // Pointer chasing with three-colour marks: 0 unvisited, 1 on the current
  // path, 2 finished.
  std::vector<char> mark(n, 0);
  std::vector<std::size_t> path;
  for (std::size_t start = 0; start < n; ++start) {
    if (mark[start] != 0) continue;
    path.clear();
    std::size_t v = start;
    while (mark[v] == 0) {
      mark[v] = 1;
      path.push_back(v);
      if (f.parent_[v] == v) break;
      v = f.parent_[v];
    }
    if (mark[v] == 1 && f.parent_[v] != v) {
      auto at = std::find(path.begin(), path.end(), v);
      std::vector<std::size_t> cycle(at, path.end());
      auto smallest = std::min_element(cycle.begin(), cycle.end());
      std::rotate(cycle.begin(), smallest, cycle.end());
      std::vector<std::string> witness;
      for (auto c : cycle) witness.push_back(f.ids_[c]);
      std::string msg = "parent map has a cycle:";
      for (const auto& w : witness) msg += " " + w;
      throw Error(ErrorCode::CycleError, msg, std::move(witness));
    }
    for (auto u : path) mark[u] = 2;
  }

  f.children_.assign(n, {});
  for (std::size_t i = 0; i < n; ++i) {
    if (f.parent_[i] != i) f.children_[f.parent_[i]].push_back(i);
  }

  // Depth and root by memoised upward walks.
  constexpr std::size_t unknown = static_cast<std::size_t>(-1);
  f.depth_.assign(n, unknown);
  f.root_.assign(n, unknown);
  std::vector<std::size_t> stack;
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t v = i;
    stack.clear();
    while (f.depth_[v] == unknown && f.parent_[v] != v) {
      stack.push_back(v);
      v = f.parent_[v];
    }
    if (f.depth_[v] == unknown) {
      f.depth_[v] = 0;
      f.root_[v] = v;
    }
    for (auto it = stack.rbegin(); it != stack.rend(); ++it) {
      f.depth_[*it] = f.depth_[f.parent_[*it]] + 1;
      f.root_[*it] = f.root_[f.parent_[*it]];
    }
  }
  return f;
}

std::optional<std::size_t> DirectedForest::find(std::string_view id) const {
  auto it = std::lower_bound(ids_.begin(), ids_.end(), id,
                             [](const VertexId& a, std::string_view b) { return a < b; });
  if (it == ids_.end() || *it != id) return std::nullopt;
  return static_cast<std::size_t>(it - ids_.begin());
}

std::size_t DirectedForest::index(std::string_view id) const {
  auto i = find(id);
  if (!i) {
    throw Error(ErrorCode::UnknownVertex, "unknown vertex '" + std::string(id) + "'",
                {std::string(id)});
  }
  return *i;
}

std::vector<std::size_t> DirectedForest::root_indices() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < size(); ++i) {
    if (is_root(i)) out.push_back(i);
  }
  return out;
}

std::map<VertexId, VertexId> DirectedForest::parent_map() const {
  std::map<VertexId, VertexId> out;
  for (std::size_t i = 0; i < size(); ++i) out.emplace(ids_[i], ids_[parent_[i]]);
  return out;
}

std::vector<VertexId> roots(const DirectedForest& f) {
  std::vector<VertexId> out;
  for (auto r : f.root_indices()) out.push_back(f.id(r));
  return out;
}

namespace {

std::vector<VertexId> to_ids(const DirectedForest& f, const std::vector<std::size_t>& idx) {
  std::vector<VertexId> out;
  out.reserve(idx.size());
  for (auto i : idx) out.push_back(f.id(i));
  return out;
}

}  // namespace

std::vector<VertexId> children(const DirectedForest& f, std::string_view v) {
  auto kids = f.children(f.index(v));
  return to_ids(f, std::vector<std::size_t>(kids.begin(), kids.end()));
}

std::vector<std::size_t> chi_k_indices(const DirectedForest& f, std::size_t v, unsigned k) {
  std::vector<std::size_t> level{v};
  std::vector<std::size_t> next;
  for (unsigned step = 0; step < k && !level.empty(); ++step) {
    next.clear();
    for (auto u : level) {
      auto kids = f.children(u);
      next.insert(next.end(), kids.begin(), kids.end());
    }
    level.swap(next);
  }
  std::sort(level.begin(), level.end());
  return level;
}

std::vector<VertexId> chi_k(const DirectedForest& f, std::string_view v, unsigned k) {
  return to_ids(f, chi_k_indices(f, f.index(v), k));
}

std::vector<std::size_t> descendant_indices(const DirectedForest& f, std::size_t v) {
  std::vector<std::size_t> out;
  std::vector<std::size_t> stack{v};
  while (!stack.empty()) {
    auto u = stack.back();
    stack.pop_back();
    out.push_back(u);
    for (auto c : f.children(u)) stack.push_back(c);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<VertexId> descendants(const DirectedForest& f, std::string_view v) {
  return to_ids(f, descendant_indices(f, f.index(v)));
}

DirectedForest induced_subforest(const DirectedForest& f, std::span<const std::size_t> subset) {
  std::vector<char> in(f.size(), 0);
  for (auto i : subset) in.at(i) = 1;
  std::map<VertexId, VertexId> parent;
  for (auto i : subset) {
    auto p = f.parent(i);
    parent.emplace(f.id(i), in[p] ? f.id(p) : f.id(i));
  }
  return DirectedForest::from_parent_map(parent);
}

DirectedForest des_subtree(const DirectedForest& f, std::string_view v) {
  auto des = descendant_indices(f, f.index(v));
  return induced_subforest(f, des);
}

std::vector<std::size_t> component_labels(const DirectedForest& f) {
  // Components are identified by their root; order them by smallest member.
  std::vector<std::size_t> first(f.size(), static_cast<std::size_t>(-1));
  for (std::size_t i = 0; i < f.size(); ++i) {
    auto r = f.root_of(i);
    if (first[r] == static_cast<std::size_t>(-1)) first[r] = i;
  }
  std::vector<std::size_t> order;
  for (auto r : f.root_indices()) order.push_back(r);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return first[a] < first[b]; });
  std::vector<std::size_t> rank(f.size(), 0);
  for (std::size_t j = 0; j < order.size(); ++j) rank[order[j]] = j;
  std::vector<std::size_t> labels(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) labels[i] = rank[f.root_of(i)];
  return labels;
}

std::vector<DirectedForest> components(const DirectedForest& f) {
  auto labels = component_labels(f);
  std::size_t count = f.root_indices().size();
  std::vector<std::vector<std::size_t>> members(count);
  for (std::size_t i = 0; i < f.size(); ++i) members[labels[i]].push_back(i);
  std::vector<DirectedForest> out;
  out.reserve(count);
  for (const auto& m : members) out.push_back(induced_subforest(f, m));
  return out;
}

bool is_tree(const DirectedForest& f) { return f.root_indices().size() == 1; }

bool is_rooted_tree(const DirectedForest& f) { return is_tree(f); }

VertexId tree_root(const DirectedForest& t) {
  auto rs = t.root_indices();
  if (rs.size() != 1) {
    throw Error(ErrorCode::NotRootedTree, "expected a rooted tree, found " +
                                              std::to_string(rs.size()) + " components");
  }
  return t.id(rs.front());
}

VertexId fresh_id(const std::string& base, const std::set<VertexId>& taken) {
  if (!taken.contains(base)) return base;
  for (std::size_t n = 1;; ++n) {
    auto candidate = base + "_" + std::to_string(n);
    if (!taken.contains(candidate)) return candidate;
  }
}

namespace {

std::map<VertexId, VertexId> merged_parent_map(std::span<const DirectedForest> forests,
                                               AutoPrefix prefix) {
  std::map<VertexId, VertexId> parent;
  for (std::size_t j = 0; j < forests.size(); ++j) {
    const std::string tag = prefix == AutoPrefix::Yes ? std::to_string(j) + ":" : "";
    for (const auto& [v, p] : forests[j].parent_map()) {
      auto [it, inserted] = parent.emplace(tag + v, tag + p);
      if (!inserted) {
        throw Error(ErrorCode::VertexCollision,
                    "vertex id '" + tag + v + "' occurs in more than one member",
                    {tag + v});
      }
    }
  }
  return parent;
}

}  // namespace

DirectedForest direct_sum(std::span<const DirectedForest> forests, AutoPrefix prefix) {
  if (forests.empty()) {
    throw Error(ErrorCode::EmptyFamily, "direct sum of an empty family is undefined");
  }
  return DirectedForest::from_parent_map(merged_parent_map(forests, prefix));
}

DirectedForest rooted_sum(std::span<const DirectedForest> trees, AutoPrefix prefix) {
  for (std::size_t j = 0; j < trees.size(); ++j) {
    if (!is_rooted_tree(trees[j])) {
      throw Error(ErrorCode::NotRootedTree,
                  "member " + std::to_string(j) + " of a rooted sum is not a rooted tree",
                  {std::to_string(j)});
    }
  }
  auto parent = merged_parent_map(trees, prefix);
  std::set<VertexId> taken;
  for (const auto& [v, p] : parent) taken.insert(v);
  VertexId root = fresh_id("root", taken);
  for (auto& [v, p] : parent) {
    if (v == p) p = root;
  }
  parent.emplace(root, root);
  return DirectedForest::from_parent_map(parent);
}

std::vector<VertexId> backward_extension_ids(const DirectedForest& t, unsigned k) {
  std::set<VertexId> taken(t.vertices().begin(), t.vertices().end());
  std::vector<VertexId> out;
  for (unsigned j = 1; j <= k; ++j) {
    auto id = fresh_id("ext" + std::to_string(j), taken);
    taken.insert(id);
    out.push_back(id);
  }
  return out;
}

DirectedForest backward_extend_tree(const DirectedForest& t, unsigned k) {
  auto old_root = tree_root(t);
  if (k == 0) return t;
  auto chain = backward_extension_ids(t, k);
  auto parent = t.parent_map();
  parent[old_root] = chain.front();
  for (unsigned j = 0; j + 1 < k; ++j) parent[chain[j]] = chain[j + 1];
  parent[chain.back()] = chain.back();
  return DirectedForest::from_parent_map(parent);
}

DirectedForest power_k(const DirectedForest& f, unsigned k) {
  if (k == 0) throw Error(ErrorCode::InvalidArgument, "power_k requires k >= 1");
  std::map<VertexId, VertexId> parent;
  for (std::size_t v = 0; v < f.size(); ++v) {
    // p^(k-1)(v) is a root iff depth(v) <= k-1.
    std::size_t target = v;
    if (f.depth(v) >= k) {
      for (unsigned s = 0; s < k; ++s) target = f.parent(target);
    }
    parent.emplace(f.id(v), f.id(target));
  }
  return DirectedForest::from_parent_map(parent);
}

std::string_view to_string(ForestClassification::Kind kind) {
  switch (kind) {
    case ForestClassification::Kind::NArmStar: return "NArmStar";
    case ForestClassification::Kind::LinearSegment: return "LinearSegment";
    case ForestClassification::Kind::NotForkless: return "NotForkless";
    case ForestClassification::Kind::DegenerateTree: return "DegenerateTree";
  }
  return "Unknown";
}

ForestClassification classify_forkless(const DirectedForest& tree,
                                       const std::set<VertexId>& tailed) {
  if (!is_tree(tree)) {
    throw Error(ErrorCode::NotATree, "classify_forkless expects a single tree");
  }
  auto effective_degree = [&](std::size_t v) {
    return tree.degree(v) + (tailed.contains(tree.id(v)) ? 1 : 0);
  };
  bool finite_end = false;
  for (std::size_t v = 0; v < tree.size(); ++v) {
    if (tree.is_root(v)) continue;
    auto d = effective_degree(v);
    if (d >= 2) return {ForestClassification::Kind::NotForkless, 0};
    if (d == 0) finite_end = true;
  }
  auto root_degree = effective_degree(tree.root_indices().front());
  if (!finite_end) return {ForestClassification::Kind::NArmStar, root_degree};
  if (root_degree <= 1) return {ForestClassification::Kind::LinearSegment, 0};
  return {ForestClassification::Kind::DegenerateTree, 0};
}

namespace {

std::vector<std::string> subtree_codes(const DirectedForest& f) {
  std::vector<std::size_t> order(f.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return f.depth(a) > f.depth(b); });
  std::vector<std::string> code(f.size());
  std::vector<std::string> parts;
  for (auto v : order) {
    parts.clear();
    for (auto c : f.children(v)) parts.push_back(std::move(code[c]));
    std::sort(parts.begin(), parts.end());
    std::string s = "(";
    for (const auto& p : parts) s += p;
    s += ")";
    code[v] = std::move(s);
  }
  return code;
}

}  // namespace

std::string canonical_form_at(const DirectedForest& f, std::size_t v) {
  return canonical_form(induced_subforest(f, descendant_indices(f, v)));
}

std::string canonical_form(const DirectedForest& f) {
  auto code = subtree_codes(f);
  std::vector<std::string> trees;
  for (auto r : f.root_indices()) trees.push_back(std::move(code[r]));
  std::sort(trees.begin(), trees.end());
  std::string out;
  for (std::size_t i = 0; i < trees.size(); ++i) {
    if (i) out += ",";
    out += trees[i];
  }
  return out;
}

bool is_isomorphic(const DirectedForest& a, const DirectedForest& b) {
  return a.size() == b.size() && canonical_form(a) == canonical_form(b);
}

}  // namespace shiftlab
