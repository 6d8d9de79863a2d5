#include <gtest/gtest.h>

#include <shiftlab/shiftlab.hpp>

#include "generators.hpp"

using namespace shiftlab;

namespace {

using Ids = std::vector<VertexId>;

DirectedForest f1() {
  return DirectedForest::from_parent_map({{"0", "0"}, {"1", "0"}, {"2", "1"}, {"3", "1"}});
}

DirectedForest chain(std::size_t n, const std::string& stem = "c") {
  std::map<VertexId, VertexId> parent;
  for (std::size_t i = 0; i < n; ++i) {
    parent[stem + std::to_string(i)] = stem + std::to_string(i == 0 ? 0 : i - 1);
  }
  return DirectedForest::from_parent_map(parent);
}

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorCode::InternalCheckFailed;
}

}  // namespace

TEST(Forest, TwoChainIsValid) {
  auto f = DirectedForest::from_parent_map({{"a", "a"}, {"b", "a"}});
  EXPECT_EQ(f.size(), 2u);
  EXPECT_EQ(roots(f), Ids{"a"});
  EXPECT_TRUE(is_rooted_tree(f));
}

TEST(Forest, TwoCycleIsRejectedWithWitness) {
  try {
    DirectedForest::from_parent_map({{"a", "b"}, {"b", "a"}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::CycleError);
    EXPECT_EQ(e.witness(), (Ids{"a", "b"}));
  }
}

TEST(Forest, StructuralErrors) {
  EXPECT_EQ(code_of([] { DirectedForest::from_parent_map({}); }), ErrorCode::EmptyVertexSet);
  EXPECT_EQ(code_of([] { DirectedForest::from_parent_map({{"a", "z"}}); }),
            ErrorCode::DanglingParent);
  EXPECT_EQ(code_of([] { DirectedForest::from_parent_map({"a", "b"}, {{"a", "a"}}); }),
            ErrorCode::DanglingParent);
  EXPECT_EQ(code_of([] { DirectedForest::from_parent_map({{"a#1", "a#1"}}); }),
            ErrorCode::InvalidVertexId);
  EXPECT_EQ(code_of([] { DirectedForest::from_parent_map({{"a", "b"}, {"b", "c"}, {"c", "b"}}); }),
            ErrorCode::CycleError);
}

TEST(Forest, RootsOfExamples) {
  EXPECT_EQ(roots(f1()), Ids{"0"});
  auto degenerate = DirectedForest::from_parent_map({{"a", "a"}, {"b", "b"}, {"c", "c"}});
  EXPECT_EQ(roots(degenerate), (Ids{"a", "b", "c"}));
}

TEST(Forest, ChildrenAndChi) {
  auto f = f1();
  EXPECT_EQ(children(f, "1"), (Ids{"2", "3"}));
  EXPECT_EQ(chi_k(f, "0", 2), (Ids{"2", "3"}));
  EXPECT_EQ(chi_k(f, "0", 3), Ids{});
  for (const auto& v : f.vertices()) EXPECT_EQ(chi_k(f, v, 0), Ids{v});
  // The root is not its own child.
  EXPECT_EQ(chi_k(f, "0", 1), Ids{"1"});
}

TEST(Forest, DescendantsAndSubtrees) {
  auto f = f1();
  EXPECT_EQ(descendants(f, "1"), (Ids{"1", "2", "3"}));
  EXPECT_EQ(des_subtree(f, "0"), f);
  auto leaf = des_subtree(f, "2");
  EXPECT_EQ(leaf.size(), 1u);
  EXPECT_EQ(roots(leaf), Ids{"2"});
  auto sub = des_subtree(f, "1");
  EXPECT_EQ(roots(sub), Ids{"1"});
  EXPECT_EQ(sub.size(), 3u);
}

TEST(Forest, Components) {
  auto f = f1();
  EXPECT_EQ(components(f).size(), 1u);
  std::vector<DirectedForest> pair{f, DirectedForest::from_parent_map({{"a", "a"}, {"b", "a"}})};
  auto sum = direct_sum(pair);
  EXPECT_EQ(components(sum).size(), 2u);

  auto comps = components(power_k(f, 2));
  ASSERT_EQ(comps.size(), 2u);
  EXPECT_EQ(comps[0].vertices(), (Ids{"0", "2", "3"}));
  EXPECT_EQ(comps[1].vertices(), Ids{"1"});
}

TEST(Forest, DirectSum) {
  auto c = DirectedForest::from_parent_map({{"a", "a"}, {"b", "a"}});
  std::vector<DirectedForest> two{c, c};
  EXPECT_EQ(code_of([&] { direct_sum(two); }), ErrorCode::VertexCollision);
  auto sum = direct_sum(two, AutoPrefix::Yes);
  EXPECT_EQ(sum.size(), 4u);
  EXPECT_EQ(roots(sum), (Ids{"0:a", "1:a"}));
  EXPECT_EQ(code_of([] { direct_sum(std::vector<DirectedForest>{}); }), ErrorCode::EmptyFamily);
  std::vector<DirectedForest> one{f1()};
  EXPECT_EQ(direct_sum(one), f1());
}

TEST(Forest, RootedSum) {
  auto single = rooted_sum(std::vector<DirectedForest>{});
  EXPECT_EQ(single.size(), 1u);

  auto dot = DirectedForest::from_parent_map({{"x", "x"}});
  std::vector<DirectedForest> dots{dot, dot};
  auto claw = rooted_sum(dots, AutoPrefix::Yes);
  EXPECT_EQ(claw.size(), 3u);
  const auto r = claw.index(tree_root(claw));
  EXPECT_EQ(claw.degree(r), 2u);

  // Three trees of different shapes: each is recovered under the new root.
  std::vector<DirectedForest> family{f1(), chain(3, "q"), DirectedForest::from_parent_map({{"s", "s"}})};
  auto joined = rooted_sum(family);
  EXPECT_EQ(roots(joined).size(), 1u);
  const auto root = tree_root(joined);
  auto kids = children(joined, root);
  ASSERT_EQ(kids.size(), 3u);
  EXPECT_TRUE(is_isomorphic(des_subtree(joined, "0"), f1()));
  EXPECT_TRUE(is_isomorphic(des_subtree(joined, "q0"), chain(3)));
  EXPECT_EQ(des_subtree(joined, "s").size(), 1u);

  std::vector<DirectedForest> not_tree{DirectedForest::from_parent_map({{"a", "a"}, {"b", "b"}})};
  EXPECT_EQ(code_of([&] { rooted_sum(not_tree); }), ErrorCode::NotRootedTree);
}

TEST(Forest, BackwardExtendTree) {
  auto dot = DirectedForest::from_parent_map({{"x", "x"}});
  auto c3 = backward_extend_tree(dot, 2);
  EXPECT_EQ(c3.size(), 3u);
  EXPECT_TRUE(is_isomorphic(c3, chain(3)));
  EXPECT_EQ(backward_extend_tree(f1(), 0), f1());

  auto ext = backward_extend_tree(f1(), 3);
  const auto ids = backward_extension_ids(f1(), 3);
  ASSERT_EQ(ids.size(), 3u);
  EXPECT_EQ(tree_root(ext), ids[2]);
  for (unsigned j = 1; j <= 3; ++j) EXPECT_EQ(chi_k(ext, ids[2], j).size(), 1u);
  EXPECT_EQ(chi_k(ext, ids[2], 3), Ids{"0"});
  EXPECT_EQ(des_subtree(ext, "0"), f1());
}

TEST(Forest, PowerExamples) {
  auto p2 = power_k(f1(), 2);
  EXPECT_EQ(roots(p2), (Ids{"0", "1"}));
  auto parent = p2.parent_map();
  EXPECT_EQ(parent.at("2"), "0");
  EXPECT_EQ(parent.at("3"), "0");
  EXPECT_EQ(power_k(f1(), 1), f1());
  EXPECT_EQ(components(power_k(chain(6), 2)).size(), 2u);
  EXPECT_EQ(code_of([] { power_k(f1(), 0); }), ErrorCode::InvalidArgument);
}

TEST(Forest, ClassifyForkless) {
  using Kind = ForestClassification::Kind;
  auto star = DirectedForest::from_parent_map({{"o", "o"}, {"a", "o"}, {"b", "o"}, {"c", "o"}});
  auto cls = classify_forkless(star, {"a", "b", "c"});
  EXPECT_EQ(cls.kind, Kind::NArmStar);
  EXPECT_EQ(cls.arms, 3u);
  EXPECT_EQ(classify_forkless(f1(), {"2", "3"}).kind, Kind::NotForkless);
  auto dot = DirectedForest::from_parent_map({{"x", "x"}});
  EXPECT_EQ(classify_forkless(dot), (ForestClassification{Kind::NArmStar, 0}));
  EXPECT_EQ(classify_forkless(chain(3)).kind, Kind::LinearSegment);
  EXPECT_EQ(classify_forkless(star, {"a"}).kind, Kind::DegenerateTree);
  // A childless root with a tail is the unilateral shift: one arm.
  EXPECT_EQ(classify_forkless(dot, {"x"}), (ForestClassification{Kind::NArmStar, 1}));
}

TEST(Forest, CanonicalFormIgnoresLabels) {
  auto a = DirectedForest::from_parent_map({{"r", "r"}, {"x", "r"}, {"y", "x"}, {"z", "r"}});
  auto b = DirectedForest::from_parent_map({{"m", "m"}, {"k", "m"}, {"n", "m"}, {"j", "n"}});
  EXPECT_TRUE(is_isomorphic(a, b));
  EXPECT_FALSE(is_isomorphic(a, chain(4)));
  EXPECT_FALSE(is_isomorphic(f1(), DirectedForest::from_parent_map(
                                       {{"0", "0"}, {"1", "0"}, {"2", "0"}, {"3", "1"}})));
}

TEST(Forest, FreshId) {
  EXPECT_EQ(fresh_id("root", {"a"}), "root");
  EXPECT_EQ(fresh_id("root", {"root", "root_1"}), "root_2");
}

TEST(Forest, InducedSubforestCutsParents) {
  auto f = f1();
  std::vector<std::size_t> subset{f.index("1"), f.index("2")};
  auto g = induced_subforest(f, subset);
  EXPECT_EQ(roots(g), Ids{"1"});
  EXPECT_EQ(g.parent_map().at("2"), "1");
}

TEST(Forest, RandomForestsHaveOneRootPerComponent) {
  gen::Rng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    auto f = gen::random_forest(rng, gen::uniform(rng, 1, 40), 0.2);
    auto comps = components(f);
    EXPECT_EQ(comps.size(), roots(f).size());
    for (const auto& c : comps) EXPECT_EQ(roots(c).size(), 1u);
    auto labels = component_labels(f);
    for (std::size_t v = 0; v < f.size(); ++v) EXPECT_EQ(labels[v], labels[f.parent(v)]);
  }
}

TEST(Forest, RootedSumRecoversMembers) {
  gen::Rng rng(12);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<DirectedForest> family;
    for (std::size_t j = 0, n = gen::uniform(rng, 1, 4); j < n; ++j) {
      family.push_back(gen::random_tree(rng, gen::uniform(rng, 1, 10)));
    }
    auto joined = rooted_sum(family, AutoPrefix::Yes);
    for (std::size_t j = 0; j < family.size(); ++j) {
      const auto r = std::to_string(j) + ":" + tree_root(family[j]);
      EXPECT_TRUE(is_isomorphic(des_subtree(joined, r), family[j]));
    }
  }
}

TEST(Forest, BackwardExtensionProperties) {
  gen::Rng rng(13);
  for (int trial = 0; trial < 100; ++trial) {
    auto t = gen::random_tree(rng, gen::uniform(rng, 1, 15));
    const unsigned k = static_cast<unsigned>(gen::uniform(rng, 0, 4));
    auto ext = backward_extend_tree(t, k);
    const auto top = tree_root(ext);
    for (unsigned j = 1; j <= k; ++j) ASSERT_EQ(chi_k(ext, top, j).size(), 1u);
    const auto base = chi_k(ext, top, k);
    ASSERT_EQ(base.size(), 1u);
    EXPECT_TRUE(is_isomorphic(des_subtree(ext, base[0]), t));
  }
}
