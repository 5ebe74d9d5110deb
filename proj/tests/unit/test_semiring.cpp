#include "generators.hpp"

#include "wtl/errors.hpp"
#include "wtl/semiring.hpp"

#include <gtest/gtest.h>

using namespace wtl;
using namespace wtl::testing;

namespace {

std::vector<Weight> ws(const Semiring& s, std::initializer_list<const char*> lits) {
  std::vector<Weight> out;
  for (auto l : lits) out.push_back(s.parse(l));
  return out;
}

}  // namespace

TEST(Semiring, SumExamples) {
  Semiring nat = Semiring::naturals(), trop = Semiring::tropical();
  EXPECT_EQ(nat.sum(ws(nat, {"2", "3", "0"})), nat.parse("5"));
  EXPECT_EQ(trop.sum(ws(trop, {"3", "1", "inf"})), trop.parse("1"));
  for (const auto& s : all_semirings()) EXPECT_EQ(s.sum({}), s.zero());
}

TEST(Semiring, ProductExamples) {
  Semiring nat = Semiring::naturals(), b = Semiring::boolean();
  EXPECT_EQ(nat.product(ws(nat, {"2", "3"})), nat.parse("6"));
  EXPECT_EQ(b.product(ws(b, {"1", "0", "1"})), b.zero());
  for (const auto& s : all_semirings()) EXPECT_EQ(s.product({}), s.one());
}

TEST(Semiring, ZeroTests) {
  EXPECT_TRUE(Semiring::tropical().is_zero(Semiring::tropical().parse("inf")));
  EXPECT_TRUE(Semiring::naturals().is_zero(Semiring::naturals().parse("0")));
  EXPECT_FALSE(Semiring::viterbi().is_zero(Semiring::viterbi().parse("1/2")));
  EXPECT_FALSE(Semiring::tropical().is_zero(Semiring::tropical().parse("0")));
}

TEST(Semiring, TropicalAndViterbiOperations) {
  Semiring t = Semiring::tropical(), v = Semiring::viterbi();
  EXPECT_EQ(t.add(t.parse("2"), t.parse("1/2")), t.parse("1/2"));
  EXPECT_EQ(t.mul(t.parse("2"), t.parse("1/2")), t.parse("5/2"));
  EXPECT_EQ(t.mul(t.parse("2"), t.zero()), t.zero());
  EXPECT_EQ(v.add(v.parse("1/3"), v.parse("1/2")), v.parse("1/2"));
  EXPECT_EQ(v.mul(v.parse("1/3"), v.parse("1/2")), v.parse("1/6"));
}

TEST(Semiring, NaturalsDoNotOverflow) {
  Semiring nat = Semiring::naturals();
  Weight w = nat.parse("18446744073709551615");  // 2^64 - 1
  Weight sq = nat.mul(w, w);
  EXPECT_EQ(nat.render(sq), "340282366920938463426481119284349108225");
}

TEST(Semiring, RationalsAreCanonical) {
  Semiring v = Semiring::viterbi();
  EXPECT_EQ(v.parse("2/4"), v.parse("1/2"));
  EXPECT_EQ(v.render(v.parse("2/4")), "1/2");
}

TEST(Semiring, ByName) {
  EXPECT_EQ(Semiring::by_name("bool").kind(), SemiringKind::Boolean);
  EXPECT_EQ(Semiring::by_name("nat").kind(), SemiringKind::Naturals);
  EXPECT_EQ(Semiring::by_name("tropical").kind(), SemiringKind::Tropical);
  EXPECT_EQ(Semiring::by_name("viterbi").kind(), SemiringKind::Viterbi);
  EXPECT_THROW(Semiring::by_name("reals"), Error);
}

TEST(Semiring, RejectsOutOfRangeLiterals) {
  EXPECT_THROW(Semiring::viterbi().parse("3/2"), Error);
  EXPECT_THROW(Semiring::boolean().parse("2"), Error);
  EXPECT_THROW(Semiring::naturals().parse("-1"), Error);
  EXPECT_THROW(Semiring::naturals().parse("1/2"), Error);
}

// Axioms on sampled triples.
TEST(SemiringProperty, AxiomsOnRandomTriples) {
  for (const auto& s : all_semirings()) {
    Rng rng(17);
    for (int i = 0; i < 300; ++i) {
      Weight a = random_weight(s, rng), b = random_weight(s, rng), c = random_weight(s, rng);
      EXPECT_EQ(s.mul(a, s.add(b, c)), s.add(s.mul(a, b), s.mul(a, c)));
      EXPECT_EQ(s.add(a, b), s.add(b, a));
      EXPECT_EQ(s.mul(a, b), s.mul(b, a));
      EXPECT_EQ(s.add(s.add(a, b), c), s.add(a, s.add(b, c)));
      EXPECT_EQ(s.mul(s.mul(a, b), c), s.mul(a, s.mul(b, c)));
      EXPECT_EQ(s.mul(a, s.zero()), s.zero());
      EXPECT_EQ(s.add(a, s.zero()), a);
      EXPECT_EQ(s.mul(a, s.one()), a);
    }
  }
}

TEST(SemiringProperty, RenderParseRoundTrip) {
  for (const auto& s : all_semirings()) {
    Rng rng(23);
    for (int i = 0; i < 100; ++i) {
      Weight a = random_weight(s, rng);
      Weight b = s.mul(a, random_weight(s, rng));
      EXPECT_EQ(s.parse(s.render(a)), a);
      EXPECT_EQ(s.parse(s.render(b)), b);
    }
  }
}
