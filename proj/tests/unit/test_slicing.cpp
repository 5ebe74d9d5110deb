#include "generators.hpp"
#include "oracles.hpp"

#include "wtl/errors.hpp"
#include "wtl/slicing.hpp"

#include <gtest/gtest.h>

#include <set>

using namespace wtl;
using namespace wtl::testing;

namespace {

const char* kXi1 = "sigma(sigma(sigma(alpha,alpha),alpha),alpha)";

std::set<std::string> bodies(const std::vector<Slice>& ss) {
  std::set<std::string> out;
  for (const auto& s : ss) out.insert(render_tree(s.body));
  return out;
}

}  // namespace

TEST(Slicing, HeadCutExamples) {
  Tree xi1 = parse_tree(kXi1);
  HeadCut a = head_cut(xi1, Position{}, 1);
  EXPECT_EQ(a.head.body, parse_tree("sigma(z1,alpha)"));
  EXPECT_EQ(a.head.k, 1);
  EXPECT_EQ(a.cut, (std::vector<Position>{Position{1}}));
  HeadCut b = head_cut(xi1, Position{1}, 1);
  EXPECT_EQ(b.head.body, parse_tree("sigma(z1,alpha)"));
  EXPECT_EQ(b.cut, (std::vector<Position>{Position{1, 1}}));
  HeadCut low = head_cut(xi1, Position{1, 1}, 2);
  EXPECT_EQ(low.head.body, parse_tree("sigma(alpha,alpha)"));
  EXPECT_TRUE(low.cut.empty());
  EXPECT_THROW(head_cut(xi1, Position{3}, 1), PositionOutOfRange);
}

TEST(Slicing, DecompositionExamples) {
  Tree xi1 = parse_tree(kXi1);
  Decomposition d = decompose(xi1, 1);
  EXPECT_EQ(d.count(), 3u);
  EXPECT_EQ(d.head.body, parse_tree("sigma(z1,alpha)"));
  ASSERT_EQ(d.children.size(), 1u);
  EXPECT_EQ(d.children[0].head.body, parse_tree("sigma(z1,alpha)"));
  ASSERT_EQ(d.children[0].children.size(), 1u);
  EXPECT_EQ(d.children[0].children[0].head.body, parse_tree("sigma(alpha,alpha)"));
  EXPECT_EQ(decompose(xi1, 2).count(), 1u);
  for (int n = 1; n <= 3; ++n) {
    Decomposition leaf = decompose(parse_tree("alpha"), n);
    EXPECT_EQ(leaf.count(), 1u);
    EXPECT_EQ(leaf.head.body, parse_tree("alpha"));
  }
}

TEST(Slicing, EnumerationExamples) {
  RankedAlphabet sigma = binary_alphabet();
  EXPECT_EQ(bodies(enumerate_slices(sigma, 1, 0)), (std::set<std::string>{"alpha", "sigma(alpha,alpha)"}));
  EXPECT_EQ(bodies(enumerate_slices(sigma, 1, 2)), (std::set<std::string>{"sigma(z1,z2)"}));
  EXPECT_EQ(bodies(enumerate_slices(sigma, 1, 1)), (std::set<std::string>{"sigma(z1,alpha)", "sigma(alpha,z1)"}));
  EXPECT_TRUE(enumerate_slices(sigma, 1, 3).empty());
}

TEST(Slicing, ClassesAreDisjoint) {
  RankedAlphabet sigma = binary_alphabet();
  std::set<std::string> seen;
  size_t total = 0;
  for (int k = 0; k <= 4; ++k) {
    auto b = bodies(enumerate_slices(sigma, 2, k));
    total += b.size();
    seen.insert(b.begin(), b.end());
  }
  EXPECT_EQ(seen.size(), total);
  EXPECT_EQ(total, 26u + 40 + 26 + 8 + 1);
}

TEST(Slicing, MaxArity) {
  EXPECT_EQ(max_slice_arity(binary_alphabet(), 1), 2);
  EXPECT_EQ(max_slice_arity(binary_alphabet(), 2), 4);
  EXPECT_EQ(max_slice_arity(RankedAlphabet{{"gamma", 1}, {"e", 0}}, 3), 1);
  EXPECT_EQ(max_slice_arity(RankedAlphabet{{"alpha", 0}, {"beta", 0}}, 1), 0);
  // The bound is attained and nothing lies above it.
  for (int n = 1; n <= 2; ++n) {
    int k = max_slice_arity(binary_alphabet(), n);
    EXPECT_FALSE(enumerate_slices(binary_alphabet(), n, k).empty());
    EXPECT_TRUE(enumerate_slices(binary_alphabet(), n, k + 1).empty());
  }
}

TEST(Slicing, EnumerationCap) {
  EXPECT_THROW(enumerate_slices(mixed_alphabet(), 2, 0, 10), ExplosionGuard);
  EXPECT_EQ(count_slices(mixed_alphabet(), 2, 0, 10), 11u);
}

TEST(Slicing, SliceClassMembership) {
  RankedAlphabet sigma = binary_alphabet();
  EXPECT_TRUE(in_slice_class(parse_tree("sigma(z1,alpha)"), 1, 1, sigma));
  EXPECT_FALSE(in_slice_class(parse_tree("sigma(z2,z1)"), 1, 2, sigma));
  EXPECT_FALSE(in_slice_class(parse_tree("sigma(sigma(z1,alpha),alpha)"), 1, 1, sigma));
  EXPECT_FALSE(in_slice_class(parse_tree("sigma(sigma(alpha,alpha),alpha)"), 1, 0, sigma));
  EXPECT_EQ(variable_positions(parse_tree("sigma(sigma(z1,alpha),z2)")),
            (std::vector<Position>{Position{1, 1}, Position{2}}));
}

// Properties over random trees of a mixed alphabet.
TEST(SlicingProperty, HeadCutMatchesBruteForce) {
  Rng rng(4);
  for (int i = 0; i < 120; ++i) {
    Tree t = random_tree(mixed_alphabet(), 11, rng);
    for (int n = 1; n <= 2; ++n)
      for (const auto& u : positions(t)) {
        auto cands = brute_force_head_cuts(t, u, n);
        ASSERT_EQ(cands.size(), 1u) << render_tree(t);
        HeadCut hc = head_cut(t, u, n);
        EXPECT_EQ(cands[0].cut, hc.cut);
        EXPECT_EQ(cands[0].head, hc.head.body);
      }
  }
}

TEST(SlicingProperty, RecomposeAndSize) {
  Rng rng(6);
  for (int i = 0; i < 300; ++i) {
    Tree t = random_tree(mixed_alphabet(), 25, rng);
    for (int n = 1; n <= 3; ++n) {
      Decomposition d = decompose(t, n);
      EXPECT_EQ(recompose(d), t);
      EXPECT_EQ(d.count() == 1, tree_height(t) < 2 * n);
    }
  }
}

TEST(SlicingProperty, CountsMatchIndependentCount) {
  const RankedAlphabet alphabets[] = {binary_alphabet(), monadic_alphabet(), mixed_alphabet()};
  for (const auto& sigma : alphabets)
    for (int n = 1; n <= 2; ++n) {
      auto brute = brute_force_slice_counts(sigma, n);
      for (int k = 0; k <= max_slice_arity(sigma, n); ++k) EXPECT_EQ(count_slices(sigma, n, k), brute[k]);
    }
}
