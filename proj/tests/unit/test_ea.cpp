#include "generators.hpp"
#include "oracles.hpp"

#include "wtl/ea.hpp"
#include "wtl/errors.hpp"
#include "wtl/evaluate.hpp"

#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

using namespace wtl;
using namespace wtl::testing;

namespace {

std::string slurp(const std::string& name) {
  std::ifstream in(std::string(WTL_EXAMPLES_DIR) + "/" + name);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const char* kDeltaTree = "delta(alpha,beta,sigma(alpha,alpha))";

Tree gamma_power(int n) {
  Tree t("alpha");
  for (int i = 0; i < n; ++i) t = Tree("gamma", {t});
  return t;
}

}  // namespace

TEST(Ea, ForkExamples) {
  Tree t = parse_tree(kDeltaTree);
  PositionSet J{Position{}, Position{2}, Position{3}, Position{3, 1}};
  Fork root = find_fork(t, J, Position{});
  EXPECT_EQ(root.top, Position{});
  EXPECT_EQ(root.below, (std::vector<Position>{Position{2}, Position{3}}));
  EXPECT_EQ(root.k(), 2);
  EXPECT_EQ(find_fork(t, J, Position{3}).below, (std::vector<Position>{Position{3, 1}}));
  EXPECT_EQ(find_fork(t, J, Position{2}).k(), 0);
  EXPECT_EQ(find_fork(t, J, Position{3, 1}).k(), 0);
  EXPECT_THROW(find_fork(t, J, Position{1}), InvalidInput);
  EXPECT_THROW(find_fork(t, PositionSet{Position{}, Position{4}}, Position{}), InvalidInput);

  auto all = forks_below(t, J, Position{}, 3);
  EXPECT_EQ(all.size(), 4u);
  EXPECT_EQ(branching_degree(t, J), 2);
  // Degree limit drops the root fork.
  EXPECT_EQ(forks_below(t, J, Position{}, 1).size(), 3u);
  EXPECT_EQ(forks_below(t, J, Position{3}, 3).size(), 2u);
  EXPECT_EQ(branching_degree(t, PositionSet{}), 0);
}

TEST(Ea, ExampleFamilyOnSecondTree) {
  const Semiring nat = Semiring::naturals();
  FormulaFamily fam = parse_family(slurp("tiling.phi"), nat).family;
  EXPECT_THROW(classify_family(fam), NotStepFamily);
  EXPECT_THROW(build_psi(fam, 2, nat.kind(), true), NotStepFamily);
  EaFormula ef = build_psi(fam, 2, nat.kind(), false);
  Assignment a;
  a.fo[ef.x] = Position{};
  Tree xi2 = parse_tree(slurp("xi2.tree"));
  EXPECT_EQ(evaluate(nat, ef.psi, xi2, a), nat.one());
  EXPECT_EQ(ef.psi->free_vars(), (std::vector<std::string>{"x"}));
  EaReport r = check_ea(nat, fam, enumerate_trees(binary_alphabet(), 7), 2, false);
  EXPECT_TRUE(r.pass) << r.what;
  EXPECT_EQ(r.checked, 9u);
}

TEST(Ea, ZeroPhiZeroGivesZero) {
  const Semiring nat = Semiring::naturals();
  FormulaFamily fam{{mso::zero(), parse_formula("(edge 1 x y1)", nat)}};
  EaFormula ef = build_psi(fam, 1, nat.kind());
  for (int n = 0; n <= 5; ++n) {
    Assignment a;
    a.fo["x"] = Position{};
    EXPECT_TRUE(evaluate(nat, ef.psi, gamma_power(n), a).is_zero());
    EXPECT_TRUE(eval_tc(nat, Progress::desc_plus(), fam, gamma_power(n)).is_zero());
  }
}

TEST(Ea, WeightIsPulledOutOfWitnesses) {
  // Every gamma node contributes a factor 2.
  const Semiring nat = Semiring::naturals();
  FormulaFamily fam{{parse_formula("(label alpha x)", nat),
                     parse_formula("(and (const 2) (label gamma x) (edge 1 x y1))", nat)}};
  EXPECT_EQ(classify_family(fam), StepLogic::BFOmod);
  EaFormula ef = build_psi(fam, 1, nat.kind());
  Formula step = theta_to_step(nat, fam, 1);
  EXPECT_TRUE(step->in(Fragment::BFOmodStep) || step->in(Fragment::BMSOStep));
  for (int n = 0; n <= 6; ++n) {
    Tree t = gamma_power(n);
    Assignment a;
    a.fo["x"] = Position{};
    const Weight want = nat.parse(std::to_string(1 << n));
    EXPECT_EQ(eval_tc(nat, Progress::desc_plus(), fam, t), want);
    EXPECT_EQ(evaluate(nat, ef.psi, t, a), want);
  }
  std::vector<Tree> trees;
  for (int n = 0; n <= 6; ++n) trees.push_back(gamma_power(n));
  EaReport r = check_ea(nat, fam, trees, 1);
  EXPECT_TRUE(r.pass) << r.what;
}

TEST(Ea, ClassifyFamily) {
  const Semiring b = Semiring::boolean();
  FormulaFamily bfo{{parse_formula("(label alpha x)", b), parse_formula("(edge 1 x y1)", b)}};
  EXPECT_EQ(classify_family(bfo), StepLogic::BFOmod);
  FormulaFamily bmso{{parse_formula("(not (forall2 X (not (in x X))))", b), parse_formula("(edge 1 x y1)", b)}};
  EXPECT_EQ(classify_family(bmso), StepLogic::BMSO);
  EXPECT_THROW(check_ea(b, bfo, {gamma_power(17)}, 1), ExplosionGuard);
}

// Properties.
TEST(EaProperty, StepFormOfThetaAgrees) {
  for (int si = 0; si < 4; ++si) {
    Semiring s = semiring_by_index(si);
    Rng rng(110 + static_cast<uint64_t>(si));
    for (int i = 0; i < 3; ++i) {
      FormulaFamily fam = random_step_family(s, binary_alphabet(), rng.uniform(1, 2), rng);
      EaFormula ef = build_psi(fam, 2, s.kind());
      Formula step = theta_to_step(s, fam, 2);
      for (const auto& t : enumerate_trees(binary_alphabet(), 5)) {
        IndexedTree it(t);
        Evaluator ev(s, it);
        const uint32_t n = static_cast<uint32_t>(it.size());
        for (uint32_t w = 0; w < n; ++w)
          for (uint32_t J = 0; J < (1u << n); ++J)
            for (uint32_t v = 0; v < n; ++v) {
              Env env;
              env.push(ef.x, w);
              env.push(ef.X, J);
              env.push(ef.y, v);
              ASSERT_EQ(ev.eval(ef.theta, env), ev.eval(step, env))
                  << render_tree(t) << " w=" << w << " J=" << J << " v=" << v;
            }
      }
    }
  }
}

TEST(EaProperty, ForksMatchBruteForce) {
  Rng rng(120);
  for (int i = 0; i < 60; ++i) {
    Tree t = random_tree(mixed_alphabet(), 9, rng);
    auto pos = positions(t);
    PositionSet J;
    for (const auto& p : pos)
      if (rng.chance(0.5)) J.insert(p);
    int bd = 0;
    for (const auto& v : J) {
      auto brute = brute_force_forks(J, v);
      ASSERT_EQ(brute.size(), 1u);
      Fork f = find_fork(t, J, v);
      EXPECT_EQ(f.below, brute[0]);
      bd = std::max(bd, f.k());
    }
    EXPECT_EQ(branching_degree(t, J), bd);
  }
}

TEST(EaProperty, PsiMatchesClosure) {
  for (int si = 0; si < 4; ++si) {
    Semiring s = semiring_by_index(si);
    Rng rng(130 + static_cast<uint64_t>(si));
    for (int i = 0; i < 2; ++i) {
      FormulaFamily fam = random_step_family(s, binary_alphabet(), rng.uniform(1, 2), rng);
      EaReport r = check_ea(s, fam, enumerate_trees(binary_alphabet(), 7), 2);
      EXPECT_TRUE(r.pass) << r.what;
      FormulaFamily mono = random_step_family(s, monadic_alphabet(), 1, rng);
      EaReport rm = check_ea(s, mono, {gamma_power(0), gamma_power(3), gamma_power(6)}, 1);
      EXPECT_TRUE(rm.pass) << rm.what;
    }
  }
}
