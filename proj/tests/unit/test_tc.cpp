#include "generators.hpp"

#include "wtl/errors.hpp"
#include "wtl/evaluate.hpp"
#include "wtl/macros.hpp"
#include "wtl/tc.hpp"

#include <gtest/gtest.h>

#include <fstream>
#include <functional>
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

FormulaFamily example_family() { return parse_family(slurp("tiling.phi"), Semiring::naturals()).family; }

// Level values straight from the recursive definition: every tuple of
// positions is tried, and the progress relation and sibling order are
// checked on positions rather than through the table's pruning.
class NaiveTc {
 public:
  NaiveTc(Semiring s, const Progress& psi, const FormulaFamily& fam, const Tree& t)
      : s_(std::move(s)), fam_(fam), it_(t), ev_(s_, it_), psi_(psi.formula(2)),
        memo_(it_.size() * (it_.size() + 1)), done_(memo_.size(), false) {}

  Weight level(uint32_t v, size_t l) {
    const size_t n = it_.size();
    if (l < 1 || l > n) return s_.zero();
    const size_t key = v * (n + 1) + l;
    if (done_[key]) return memo_[key];
    Weight acc = s_.zero();
    if (l == 1) {
      Env env;
      env.push(family_x(), v);
      acc = ev_.eval(fam_.members[0], env);
    } else {
      for (int k = 1; k <= fam_.m(); ++k) {
        std::vector<uint32_t> tup(static_cast<size_t>(k), 0);
        while (true) {
          if (admissible(v, tup)) {
            Env env;
            env.push(family_x(), v);
            for (int i = 0; i < k; ++i) env.push(family_y(i + 1), tup[static_cast<size_t>(i)]);
            Weight w = ev_.eval(fam_.members[static_cast<size_t>(k)], env);
            acc = s_.add(acc, s_.mul(w, splits(tup, 0, l - 1)));
          }
          size_t i = 0;
          while (i < tup.size() && ++tup[i] == n) tup[i++] = 0;
          if (i == tup.size()) break;
        }
      }
    }
    done_[key] = true;
    return memo_[key] = acc;
  }

 private:
  bool admissible(uint32_t v, const std::vector<uint32_t>& tup) {
    for (size_t i = 0; i < tup.size(); ++i) {
      Env env;
      env.push(kx_, v);
      env.push(ky_, tup[i]);
      if (!ev_.holds(psi_, env)) return false;
      if (i > 0) {
        const Position &a = it_.position(tup[i - 1]), &b = it_.position(tup[i]);
        if (!(a < b) || a.is_prefix_of(b)) return false;
      }
    }
    return true;
  }

  // Sum over l_i >= 1 with sum = rest of prod level(tup[i], l_i), from index i on.
  Weight splits(const std::vector<uint32_t>& tup, size_t i, size_t rest) {
    if (i == tup.size()) return rest == 0 ? s_.one() : s_.zero();
    Weight acc = s_.zero();
    for (size_t li = 1; li <= rest; ++li) acc = s_.add(acc, s_.mul(level(tup[i], li), splits(tup, i + 1, rest - li)));
    return acc;
  }

  const std::string kx_ = "x", ky_ = "y";
  Semiring s_;
  FormulaFamily fam_;
  IndexedTree it_;
  Evaluator ev_;
  Formula psi_;
  std::vector<Weight> memo_;
  std::vector<bool> done_;
};

}  // namespace

TEST(Tc, ExampleFamilyValues) {
  const Semiring nat = Semiring::naturals();
  FormulaFamily fam = example_family();
  Tree xi1 = parse_tree(slurp("xi1.tree"));
  TcTable t = tc_levels(nat, Progress::bounded(2), fam, xi1);
  EXPECT_EQ(t.total(0), nat.parse("3"));
  EXPECT_EQ(t.level(0, 6), nat.parse("2"));
  EXPECT_EQ(t.level(0, 7), nat.parse("1"));
  EXPECT_EQ(t.level(0, 5), nat.zero());
  EXPECT_EQ(eval_tc(nat, Progress::bounded(2), fam, parse_tree(slurp("xi2.tree"))), nat.one());
  // Leaves are single phi0 blocks.
  EXPECT_EQ(eval_tc(nat, Progress::bounded(2), fam, xi1, Position{1, 2}), nat.one());
  EXPECT_THROW(eval_tc(nat, Progress::bounded(2), fam, xi1, Position{3}), PositionOutOfRange);
}

TEST(Tc, LevelOneIsPhiZero) {
  FormulaFamily fam = example_family();
  Formula l1 = build_tc_level(Progress::desc_plus(), fam, 1, "x", 2, SemiringKind::Naturals);
  EXPECT_TRUE(structurally_equal(l1, fam.members[0]));
  Formula renamed = build_tc_level(Progress::desc_plus(), fam, 1, "u", 2, SemiringKind::Naturals);
  EXPECT_EQ(renamed->free_vars(), (std::vector<std::string>{"u"}));
  EXPECT_THROW(build_tc_level(Progress::desc_plus(), fam, 0, "x", 2, SemiringKind::Naturals), InvalidInput);
}

TEST(Tc, LevelTwoShape) {
  // With m = 1, level 2 is a single existential over y.
  FormulaFamily fam{{parse_formula("(label alpha x)", Semiring::boolean()), parse_formula("(edge 1 x y1)", Semiring::boolean())}};
  Formula l2 = build_tc_level(Progress::desc_plus(), fam, 2, "x", 2, SemiringKind::Boolean);
  EXPECT_EQ(l2->kind(), FormulaKind::ExistsFO);
  EXPECT_EQ(l2->free_vars(), (std::vector<std::string>{"x"}));
}

TEST(Tc, ZeroPhiZeroGivesZero) {
  const Semiring nat = Semiring::naturals();
  FormulaFamily fam = example_family();
  fam.members[0] = mso::zero();
  for (const auto& t : enumerate_trees(binary_alphabet(), 9)) {
    TcTable tab = tc_levels(nat, Progress::desc_plus(), fam, t);
    for (size_t v = 0; v < tab.nodes(); ++v) EXPECT_TRUE(tab.total(v).is_zero());
  }
}

TEST(Tc, LiftBoundedExample) {
  const Semiring nat = Semiring::naturals();
  FormulaFamily fam = example_family();
  FormulaFamily lifted = lift_bounded(fam, 2, 2);
  ASSERT_EQ(lifted.m(), fam.m());
  EXPECT_TRUE(structurally_equal(lifted.members[0], fam.members[0]));
  Tree xi1 = parse_tree(slurp("xi1.tree"));
  EXPECT_EQ(eval_tc(nat, Progress::desc_plus(), lifted, xi1), nat.parse("3"));
  EXPECT_THROW(lift_bounded(fam, 0, 2), InvalidInput);
}

TEST(Tc, FamilyFileErrors) {
  const Semiring nat = Semiring::naturals();
  EXPECT_THROW(parse_family("", nat), ParseError);
  EXPECT_THROW(parse_family("phi0: (label alpha x)\nphi2: (const 1)\n", nat), ParseError);
  EXPECT_THROW(parse_family("phi0: (label alpha x)\nphi0: (const 1)\n", nat), ParseError);
  EXPECT_THROW(parse_family("phi0: (label alpha\n", nat), ParseError);
  EXPECT_THROW(parse_family("psi: (const 1)\n", nat), ParseError);
  FormulaFamily stray{{parse_formula("(label alpha z)", Semiring::naturals())}};
  EXPECT_THROW(validate_family(stray), InvalidInput);
  FamilyFile ff = parse_family(slurp("tiling.phi"), Semiring::boolean());
  ASSERT_TRUE(ff.semiring.has_value());
  EXPECT_EQ(ff.semiring->kind(), SemiringKind::Naturals);
  EXPECT_EQ(ff.family.m(), 3);
  Semiring s = *ff.semiring;
  FamilyFile again = parse_family(render_family(ff.family, &s, &*ff.alphabet), nat);
  for (int k = 0; k <= 3; ++k)
    EXPECT_TRUE(structurally_equal(again.family.members[static_cast<size_t>(k)], ff.family.members[static_cast<size_t>(k)]));
}

TEST(Tc, ProgressParsing) {
  EXPECT_EQ(Progress::parse("desc+").kind(), Progress::Kind::DescPlus);
  EXPECT_EQ(Progress::parse("desc_plus").kind(), Progress::Kind::DescPlus);
  Progress b = Progress::parse("bounded:3");
  EXPECT_EQ(b.kind(), Progress::Kind::Bounded);
  EXPECT_EQ(b.bound(), 3);
  EXPECT_THROW(Progress::parse("bounded:0"), InvalidInput);
  EXPECT_THROW(Progress::parse("bounded:x"), InvalidInput);
  EXPECT_THROW(Progress::parse("sideways"), InvalidInput);
  EXPECT_NO_THROW(validate_progress(Progress::custom(macros::desc_range("x", "y", 2, 3, 2)), binary_alphabet()));
  // y = x is not progress.
  EXPECT_THROW(validate_progress(Progress::custom(macros::desc("x", "y", 2)), binary_alphabet()), InvalidInput);
  EXPECT_THROW(validate_progress(Progress::custom(macros::desc("y", "x", 2)), binary_alphabet()), InvalidInput);
  EXPECT_THROW(Progress::custom(parse_formula("(const 2)", Semiring::naturals())), InvalidInput);
}

TEST(Tc, TupleCap) {
  FormulaFamily fam = example_family();
  TcOptions opts;
  opts.tuple_cap = 100;
  Tree big = parse_tree("sigma(sigma(sigma(alpha,alpha),alpha),sigma(alpha,alpha))");
  EXPECT_THROW(tc_levels(Semiring::naturals(), Progress::desc_plus(), fam, big, opts), ExplosionGuard);
}

// Properties.
TEST(TcProperty, TableMatchesNaiveRecursion) {
  for (int si = 0; si < 4; ++si) {
    Semiring s = semiring_by_index(si);
    Rng rng(70 + static_cast<uint64_t>(si));
    RankedAlphabet sigma{{"sigma", 2}, {"gamma", 1}, {"alpha", 0}};
    for (int i = 0; i < 6; ++i) {
      FormulaFamily fam = random_step_family(s, sigma, rng.uniform(1, 2), rng);
      const Progress psis[] = {Progress::desc_plus(), Progress::bounded(1), Progress::bounded(2)};
      for (const auto& psi : psis)
        for (const auto& t : enumerate_trees(sigma, 5)) {
          TcTable tab = tc_levels(s, psi, fam, t);
          NaiveTc naive(s, psi, fam, t);
          for (uint32_t v = 0; v < tab.nodes(); ++v)
            for (size_t l = 1; l <= tab.nodes(); ++l)
              ASSERT_EQ(tab.level(v, l), naive.level(v, l)) << render_tree(t) << " v=" << v << " l=" << l;
        }
    }
  }
}

TEST(TcProperty, LevelFormulaMatchesTable) {
  for (int si = 0; si < 4; ++si) {
    Semiring s = semiring_by_index(si);
    Rng rng(80 + static_cast<uint64_t>(si));
    for (int i = 0; i < 3; ++i) {
      FormulaFamily fam = random_step_family(s, binary_alphabet(), rng.uniform(1, 2), rng);
      const Progress psi = i == 0 ? Progress::desc_plus() : Progress::bounded(i);
      std::vector<Formula> levels;
      for (int l = 1; l <= 4; ++l) levels.push_back(build_tc_level(psi, fam, l, "x", 2, s.kind()));
      for (const auto& t : enumerate_trees(binary_alphabet(), 5)) {
        TcTable tab = tc_levels(s, psi, fam, t);
        for (const auto& v : positions(t)) {
          Assignment a;
          a.fo["x"] = v;
          const size_t vi = *IndexedTree(t).index_of(v);
          for (int l = 1; l <= 4; ++l)
            EXPECT_EQ(evaluate(s, levels[static_cast<size_t>(l) - 1], t, a), tab.level(vi, static_cast<size_t>(l)))
                << render_tree(t) << " l=" << l;
        }
      }
    }
  }
}

TEST(TcProperty, LevelsVanishBeyondSubtreeSize) {
  Rng rng(90);
  for (int si = 0; si < 4; ++si) {
    Semiring s = semiring_by_index(si);
    FormulaFamily fam = random_step_family(s, mixed_alphabet(), 2, rng);
    for (int i = 0; i < 30; ++i) {
      Tree t = random_tree(mixed_alphabet(), 9, rng);
      IndexedTree it(t);
      TcTable tab = tc_levels(s, Progress::desc_plus(), fam, t);
      for (uint32_t v = 0; v < it.size(); ++v) {
        const size_t sub = it.end(v) - v;
        for (size_t l = sub + 1; l <= it.size() + 1; ++l) EXPECT_TRUE(tab.level(v, l).is_zero());
      }
    }
  }
}
