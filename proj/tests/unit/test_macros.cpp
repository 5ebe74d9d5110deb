#include "generators.hpp"

#include "wtl/errors.hpp"
#include "wtl/evaluate.hpp"
#include "wtl/macros.hpp"
#include "wtl/slicing.hpp"

#include <gtest/gtest.h>

using namespace wtl;
using namespace wtl::testing;

namespace {

const RankedAlphabet kDelta{{"delta", 3}, {"sigma", 2}, {"alpha", 0}, {"beta", 0}};
const char* kXi1 = "sigma(sigma(sigma(alpha,alpha),alpha),alpha)";

// Boolean value of f on t under named position arguments.
bool holds_at(const Formula& f, const Tree& t, const std::vector<std::pair<std::string, Position>>& fo,
              const std::vector<std::pair<std::string, std::set<Position>>>& so = {}) {
  Assignment a;
  for (const auto& [n, p] : fo) a.fo[n] = p;
  for (const auto& [n, s] : so) a.so[n] = s;
  return !evaluate(Semiring::boolean(), f, t, a).is_zero();
}

}  // namespace

TEST(Macros, DescZeroIsEquality) {
  Tree t = parse_tree(kXi1);
  Formula f = macros::desc_exact("x", "y", 0, 2);
  for (const auto& u : positions(t))
    for (const auto& v : positions(t)) EXPECT_EQ(holds_at(f, t, {{"x", u}, {"y", v}}), u == v);
}

TEST(Macros, DescPlusExample) {
  Tree t = parse_tree("delta(alpha,beta,sigma(alpha,alpha))");
  Formula f = macros::desc_plus("x", "y", 3);
  EXPECT_TRUE(holds_at(f, t, {{"x", Position{}}, {"y", Position{3, 1}}}));
  EXPECT_FALSE(holds_at(f, t, {{"x", Position{2}}, {"y", Position{3, 1}}}));
  EXPECT_FALSE(holds_at(f, t, {{"x", Position{3}}, {"y", Position{3}}}));
}

TEST(Macros, BaseNodeExample) {
  Tree t = parse_tree(kXi1);
  Formula f = macros::base("y", "x", 3, 2);
  EXPECT_TRUE(holds_at(f, t, {{"y", Position{1, 1, 1}}, {"x", Position{1, 1, 1}}}));
  EXPECT_TRUE(holds_at(f, t, {{"y", Position{}}, {"x", Position{1, 1}}}));
  EXPECT_FALSE(holds_at(f, t, {{"y", Position{1}}, {"x", Position{1, 1}}}));
}

TEST(Macros, FormCutExample) {
  Tree t = parse_tree(kXi1);
  Formula f = macros::form_cut(1, "x", {"y1"}, 2);
  EXPECT_TRUE(holds_at(f, t, {{"x", Position{}}, {"y1", Position{1}}}));
  EXPECT_FALSE(holds_at(f, t, {{"x", Position{}}, {"y1", Position{2}}}));
  EXPECT_FALSE(holds_at(macros::form_cut(1, "x", {}, 2), t, {{"x", Position{}}}));
}

TEST(Macros, OracleExamples) {
  Tree t = parse_tree(kXi1);
  IndexedTree it(t);
  const RankedAlphabet sigma = binary_alphabet();
  // |12| = 2 is even.
  EXPECT_TRUE(macros::oracle("mod", sigma, {"2", "0"}, it, {static_cast<uint32_t>(*it.index_of(Position{1, 2}))}));
  // check with the whole subtree and no variables.
  EXPECT_TRUE(macros::oracle("check", sigma, {"sigma(alpha,alpha)"}, it, {static_cast<uint32_t>(*it.index_of(Position{1, 1}))}));
  EXPECT_FALSE(macros::oracle("check", sigma, {"sigma(alpha,alpha)"}, it, {0}));
}

TEST(Macros, FragmentClaims) {
  const int r = 2;
  EXPECT_TRUE(macros::desc("x", "y", r)->in(Fragment::BFO));
  EXPECT_TRUE(macros::desc_plus("x", "y", r)->in(Fragment::BFO));
  EXPECT_TRUE(macros::sibl("x", "y", r)->in(Fragment::BFO));
  EXPECT_TRUE(macros::sibl_plus("x", "y", r)->in(Fragment::BFO));
  EXPECT_TRUE(macros::sibl_n(2, "x", "y", r)->in(Fragment::BFO));
  for (int k = 0; k <= 2; ++k) {
    macros::Names zs;
    for (int i = 1; i <= k; ++i) zs.push_back("z" + std::to_string(i));
    EXPECT_TRUE(macros::fork("X", "y", zs, r)->in(Fragment::BFO));
    EXPECT_TRUE(macros::form_cut(2, "x", zs, r)->in(Fragment::BFO));
  }
  EXPECT_TRUE(macros::mod_expanded("x", 3, 1, r)->in(Fragment::BMSO));
  EXPECT_FALSE(macros::mod_expanded("x", 3, 1, r)->in(Fragment::BFO));
  Formula b = macros::base("y", "x", 2, r);
  EXPECT_TRUE(b->in(Fragment::BFOmod));
  EXPECT_FALSE(b->in(Fragment::BFO));
}

TEST(Macros, BadParams) {
  const RankedAlphabet sigma = binary_alphabet();
  EXPECT_THROW(macros::build("no_such_macro", sigma, {}), BadMacroParams);
  EXPECT_THROW(macros::build("desc_range", sigma, {"2", "1"}), BadMacroParams);
  EXPECT_THROW(macros::build("path_w", sigma, {"1.0"}), BadMacroParams);
  EXPECT_THROW(macros::build("path_w", sigma, {"3"}), BadMacroParams);
  EXPECT_THROW(macros::build("mod", sigma, {"2", "2"}), BadMacroParams);
  EXPECT_THROW(macros::build("desc_exact", sigma, {"x"}), BadMacroParams);
}

TEST(Macros, FreshBoundNames) {
  // Nesting the same macro twice must not capture variables.
  Formula inner = macros::desc_plus("x", "y", 2);
  Formula outer = macros::exists_b("y", mso::conj(inner, macros::desc_plus("y", "z", 2)));
  Tree t = parse_tree(kXi1);
  EXPECT_TRUE(holds_at(outer, t, {{"x", Position{}}, {"z", Position{1, 1}}}));
  EXPECT_FALSE(holds_at(outer, t, {{"x", Position{}}, {"z", Position{1}}}));
}

// Exhaustive agreement with the relational oracle on a mixed alphabet.
TEST(MacrosProperty, CatalogAgreesWithOracleOnMixedAlphabet) {
  RankedAlphabet sigma{{"sigma", 2}, {"gamma", 1}, {"alpha", 0}};
  const Semiring b = Semiring::boolean();
  for (const auto& spec : macros::catalog()) {
    if (spec.name == "check") continue;  // samples depend on the alphabet
    for (const auto& params : spec.samples(sigma)) {
      auto names = spec.args(params);
      Formula f = spec.build(sigma, params, names);
      for (const auto& t : enumerate_trees(sigma, 5)) {
        IndexedTree it(t);
        Evaluator ev(b, it);
        const uint32_t n = static_cast<uint32_t>(it.size());
        std::vector<uint32_t> vals(names.size(), 0), limit(names.size());
        for (size_t i = 0; i < names.size(); ++i) limit[i] = is_so_variable(names[i]) ? (1u << n) : n;
        while (true) {
          Env env;
          for (size_t i = 0; i < names.size(); ++i) env.push(names[i], vals[i]);
          ASSERT_EQ(!ev.eval(f, env).is_zero(), spec.oracle(sigma, params, it, vals))
              << spec.name << " on " << render_tree(t);
          size_t i = 0;
          while (i < vals.size() && ++vals[i] == limit[i]) vals[i++] = 0;
          if (i == vals.size()) break;
        }
      }
    }
  }
}

TEST(MacrosProperty, ProgressImpliesProperDescendant) {
  const std::string x = "x", y = "y";
  for (int n = 1; n <= 3; ++n) {
    Formula psi = macros::desc_range("x", "y", 1, n, 2);
    Formula plus = macros::desc_plus("x", "y", 2);
    for (const auto& t : enumerate_trees(binary_alphabet(), 9)) {
      IndexedTree it(t);
      Evaluator ev(Semiring::boolean(), it);
      for (uint32_t u = 0; u < it.size(); ++u)
        for (uint32_t v = 0; v < it.size(); ++v) {
          Env env;
          env.push(x, u);
          env.push(y, v);
          if (ev.holds(psi, env)) {
            EXPECT_TRUE(ev.holds(plus, env));
          }
        }
    }
  }
}

TEST(MacrosProperty, ProgressTupleDecomposes) {
  const std::string x = "x";
  const macros::Names ys{"y1", "y2"};
  Formula psi = macros::desc_range("px", "py", 1, 2, 2);
  Formula tuple = macros::progress_tuple(psi, "px", "py", x, ys, 2);
  for (const auto& t : enumerate_trees(binary_alphabet(), 7)) {
    IndexedTree it(t);
    for (uint32_t v = 0; v < it.size(); ++v)
      for (uint32_t a = 0; a < it.size(); ++a)
        for (uint32_t b = 0; b < it.size(); ++b) {
          const Position &pv = it.position(v), &pa = it.position(a), &pb = it.position(b);
          auto within = [&](const Position& p) {
            return pv.is_prefix_of(p) && p.length() > pv.length() && p.length() - pv.length() <= 2;
          };
          bool sibl = pa < pb && !pa.is_prefix_of(pb);
          Assignment asg;
          asg.fo[x] = pv;
          asg.fo["y1"] = pa;
          asg.fo["y2"] = pb;
          EXPECT_EQ(!evaluate(Semiring::boolean(), tuple, t, asg).is_zero(), within(pa) && within(pb) && sibl);
        }
  }
}
