#include <gtest/gtest.h>

#include <functional>

#include "lq/errors.hpp"
#include "lq/tree.hpp"
#include "lq/tree_metrics.hpp"
#include "support.hpp"

namespace lq {
namespace {

Tree tree(const char* text) { return parse_tree(text); }

// Reference embedding test: A_n embeds at t iff A_n embeds in a child, or t is
// an a-node and A_{n-1} embeds in both children.
bool embeds(std::size_t n, const Tree& t) {
  if (n == 0) {
    if (t.label == "e") return true;
    for (const auto& c : t.children) {
      if (embeds(0, c)) return true;
    }
    return false;
  }
  for (const auto& c : t.children) {
    if (embeds(n, c)) return true;
  }
  return t.label == "a" && t.children.size() == 2 && embeds(n - 1, t.children[0]) && embeds(n - 1, t.children[1]);
}

std::size_t brute_depth(const Tree& t) {
  std::size_t n = 0;
  while (embeds(n + 1, t)) ++n;
  return n;
}

Tree left_spine(std::size_t a_nodes) {
  Tree t{"e", {}};
  for (std::size_t i = 0; i < a_nodes; ++i) t = Tree{"a", {t, Tree{"e", {}}}};
  return t;
}

TEST(TreeTest, SerializeRoundTrip) {
  for (const char* text : {"e", "a(e)", "b(a(e),a(a(e)))"}) EXPECT_EQ(serialize(tree(text)), text);
  EXPECT_THROW(parse_tree("a(e"), ParseError);
  EXPECT_THROW(parse_tree("a(e))"), ParseError);
  EXPECT_EQ(node_count(tree("b(a(e),e)")), 4u);
}

TEST(CountTest, CountA) {
  EXPECT_EQ(count_a(tree("e")), 0u);
  EXPECT_EQ(count_a(tree("a(e)")), 1u);
  EXPECT_EQ(count_a(tree("b(a(e),a(a(e)))")), 3u);
  EXPECT_EQ(count_a(test::normal_tree(test::example_term())), 9u);
}

TEST(CountTest, MaxBranchA) {
  EXPECT_EQ(max_branch_a(tree("e")), 0u);
  EXPECT_EQ(max_branch_a(tree("b(a(e),a(a(e)))")), 2u);
  EXPECT_EQ(max_branch_a(tree("a(b(a(e),e))")), 2u);
  EXPECT_EQ(max_branch_a(test::normal_tree(test::example_term())), 9u);
}

TEST(EmbedTest, BuildAn) {
  EXPECT_EQ(serialize(build_An(0)), "e");
  EXPECT_EQ(serialize(build_An(1)), "a(e,e)");
  EXPECT_EQ(serialize(build_An(2)), "a(a(e,e),a(e,e))");
  EXPECT_EQ(node_count(build_An(5)), 63u);
}

TEST(EmbedTest, DepthOfAn) {
  for (std::size_t n = 0; n <= 8; ++n) EXPECT_EQ(embed_depth(build_An(n)), n) << n;
}

TEST(EmbedTest, SmallCases) {
  EXPECT_EQ(embed_depth(tree("e")), 0u);
  EXPECT_EQ(embed_depth(tree("a(a(e,e),e)")), 1u);
  EXPECT_EQ(embed_depth(tree("a(a(e,e),a(b(e,e),a(e,e)))")), 2u);
  EXPECT_EQ(embed_depth(tree("b(a(a(e,e),a(e,e)),e)")), 2u);
}

TEST(EmbedTest, LeftSpineIsOnlyA1) {
  Tree spine = left_spine(20);
  EXPECT_EQ(count_a(spine), 20u);
  EXPECT_EQ(embed_depth(spine), 1u);
}

TEST(EmbedTest, MatchesBruteForce) {
  // Every binary tree over {a, b, e} with up to 4 internal nodes.
  std::function<std::vector<Tree>(int)> all = [&](int internal) {
    std::vector<Tree> out;
    if (internal == 0) return std::vector<Tree>{Tree{"e", {}}};
    for (int l = 0; l < internal; ++l) {
      for (const Tree& lt : all(l)) {
        for (const Tree& rt : all(internal - 1 - l)) {
          out.push_back(Tree{"a", {lt, rt}});
          out.push_back(Tree{"b", {lt, rt}});
        }
      }
    }
    return out;
  };
  std::size_t checked = 0;
  for (int k = 0; k <= 4; ++k) {
    for (const Tree& t : all(k)) {
      EXPECT_EQ(embed_depth(t), brute_depth(t)) << serialize(t);
      ++checked;
    }
  }
  EXPECT_GT(checked, 100u);
}

TEST(EmbedTest, RejectsUnaryA) { EXPECT_THROW(embed_depth(tree("a(e)")), PreconditionError); }

}  // namespace
}  // namespace lq
