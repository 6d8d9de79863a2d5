#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace shiftlab {

// Vertex identity. Ordered by std::string comparison; that order fixes every
// iteration and serialization order in the library. The character '#' is
// reserved for tail-position labels and may not appear in an id.
using VertexId = std::string;

// A finite directed forest (V, p): a nonempty vertex set with a total parent
// map whose only cycles are fixed points. Fixed points are the roots.
//
// Immutable once built. Vertices are stored in id order, so index i < j
// iff id(i) < id(j); all index-based accessors follow that order.
class DirectedForest {
 public:
  // Validates (V, p). Throws Error with code EmptyVertexSet, InvalidVertexId,
  // DanglingParent (parent outside V, or a vertex without parent), or
  // CycleError (witness = the cycle, starting from its smallest id).
  static DirectedForest from_parent_map(std::vector<VertexId> vertices,
                                        const std::map<VertexId, VertexId>& parent);
  static DirectedForest from_parent_map(const std::map<VertexId, VertexId>& parent);

  std::size_t size() const noexcept { return ids_.size(); }
  const std::vector<VertexId>& vertices() const noexcept { return ids_; }
  const VertexId& id(std::size_t i) const { return ids_[i]; }

  std::optional<std::size_t> find(std::string_view id) const;
  // Throws Error(UnknownVertex).
  std::size_t index(std::string_view id) const;
  bool contains(std::string_view id) const { return find(id).has_value(); }

  std::size_t parent(std::size_t i) const { return parent_[i]; }
  bool is_root(std::size_t i) const { return parent_[i] == i; }
  std::span<const std::size_t> children(std::size_t i) const { return children_[i]; }
  std::size_t degree(std::size_t i) const { return children_[i].size(); }
  // Distance to the root of i's tree.
  std::size_t depth(std::size_t i) const { return depth_[i]; }
  std::size_t root_of(std::size_t i) const { return root_[i]; }
  // Non-root vertex without children.
  bool is_leaf(std::size_t i) const { return !is_root(i) && children_[i].empty(); }

  std::vector<std::size_t> root_indices() const;
  std::map<VertexId, VertexId> parent_map() const;

  // Labeled equality: same vertex ids and same parent map.
  bool operator==(const DirectedForest& other) const {
    return ids_ == other.ids_ && parent_ == other.parent_;
  }

 private:
  DirectedForest() = default;

  std::vector<VertexId> ids_;
  std::vector<std::size_t> parent_;
  std::vector<std::vector<std::size_t>> children_;
  std::vector<std::size_t> depth_;
  std::vector<std::size_t> root_;
};

// Fixed points of p, in id order.
std::vector<VertexId> roots(const DirectedForest& f);

std::vector<VertexId> children(const DirectedForest& f, std::string_view v);

// k-th children: {u : p^k(u) = v != p^(k-1)(u)}; chi_0(v) = {v}.
std::vector<VertexId> chi_k(const DirectedForest& f, std::string_view v, unsigned k);
std::vector<std::size_t> chi_k_indices(const DirectedForest& f, std::size_t v, unsigned k);

// Des(v), including v, in id order.
std::vector<VertexId> descendants(const DirectedForest& f, std::string_view v);
std::vector<std::size_t> descendant_indices(const DirectedForest& f, std::size_t v);

// The rooted tree on Des(v) with v as its root.
DirectedForest des_subtree(const DirectedForest& f, std::string_view v);

// Restriction to `subset`; a vertex whose parent falls outside becomes a root.
DirectedForest induced_subforest(const DirectedForest& f,
                                 std::span<const std::size_t> subset);

// Connected components, ordered by their smallest vertex id.
std::vector<DirectedForest> components(const DirectedForest& f);
// Component label (index into components(f)) of every vertex.
std::vector<std::size_t> component_labels(const DirectedForest& f);

bool is_tree(const DirectedForest& f);
// A tree with a (necessarily unique) root. Every finite tree is rooted.
bool is_rooted_tree(const DirectedForest& f);
VertexId tree_root(const DirectedForest& t);

enum class AutoPrefix { No, Yes };

// Disjoint union. With AutoPrefix::Yes every id of member i becomes "i:<id>";
// otherwise overlapping ids raise Error(VertexCollision).
DirectedForest direct_sum(std::span<const DirectedForest> forests,
                          AutoPrefix prefix = AutoPrefix::No);

// Adds a fresh root as the parent of every member's root. An empty family
// yields the single-vertex tree. Members must be rooted trees.
DirectedForest rooted_sum(std::span<const DirectedForest> trees,
                          AutoPrefix prefix = AutoPrefix::No);

// Prepends a chain of k fresh vertices above the root; the topmost one is the
// new root. k = 0 returns t.
DirectedForest backward_extend_tree(const DirectedForest& t, unsigned k);

// Fresh ids added by backward_extend_tree(t, k), listed from the vertex just
// above the old root (index 0) up to the new root (index k-1).
std::vector<VertexId> backward_extension_ids(const DirectedForest& t, unsigned k);

// k-th power: p^[k](v) = p^k(v) unless p^(k-1)(v) is a root, in which case v
// becomes a root. Requires k >= 1.
DirectedForest power_k(const DirectedForest& f, unsigned k);

struct ForestClassification {
  enum class Kind {
    NArmStar,       // every non-root vertex has exactly one child
    LinearSegment,  // no forks, root degree <= 1, but a finite end (leaf)
    NotForkless,    // some non-root vertex has two or more children
    DegenerateTree  // no forks, root degree >= 2, some arm ends in a leaf
  };
  Kind kind;
  std::size_t arms = 0;  // meaningful for NArmStar

  bool operator==(const ForestClassification&) const = default;
};

std::string_view to_string(ForestClassification::Kind kind);

// Classifies a single tree; `tailed` lists leaves carrying an infinite unary
// tail, each of which counts as one extra child. Throws Error(NotATree).
ForestClassification classify_forkless(const DirectedForest& tree,
                                       const std::set<VertexId>& tailed = {});

// Unlabeled canonical form: isomorphic forests have equal strings.
std::string canonical_form(const DirectedForest& f);
std::string canonical_form_at(const DirectedForest& f, std::size_t v);
bool is_isomorphic(const DirectedForest& a, const DirectedForest& b);

// Returns `base` if unused in `taken`, else base_1, base_2, ...
VertexId fresh_id(const std::string& base, const std::set<VertexId>& taken);

}  // namespace shiftlab
