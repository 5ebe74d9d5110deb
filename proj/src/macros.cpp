#include "wtl/macros.hpp"

#include "wtl/errors.hpp"
#include "wtl/slicing.hpp"

#include <algorithm>
#include <functional>
#include <map>

namespace wtl::macros {

using mso::conj;
using mso::neg;

namespace {

std::string fo(const char* stem = "v") { return fresh_name(stem); }

Formula conj_list(const std::vector<Formula>& fs) { return mso::conj_all(fs); }

}  // namespace

Formula or_b(Formula a, Formula b) { return neg(conj(neg(std::move(a)), neg(std::move(b)))); }

Formula or_b_all(const std::vector<Formula>& fs) {
  if (fs.empty()) return mso::zero();
  if (fs.size() == 1) return fs[0];
  std::function<Formula(size_t, size_t)> go = [&](size_t b, size_t e) -> Formula {
    if (e - b == 1) return fs[b];
    size_t m = b + (e - b) / 2;
    return or_b(go(b, m), go(m, e));
  };
  return go(0, fs.size());
}

Formula exists_b(const std::string& v, Formula f) { return neg(mso::forall(v, neg(std::move(f)))); }

Formula exists_b(const Names& vs, Formula f) {
  if (vs.empty()) return f;
  // One negation pair around the whole block keeps the quantifiers adjacent.
  Formula body = neg(std::move(f));
  for (auto it = vs.rbegin(); it != vs.rend(); ++it) body = mso::forall(*it, body);
  return neg(body);
}

Formula implies_b(Formula a, Formula b) { return or_b(neg(a), conj(a, std::move(b))); }

Formula implies_w(Formula a, Formula b) { return mso::disj(neg(a), conj(a, std::move(b))); }

Formula eq(const std::string& x, const std::string& y) {
  return conj(mso::leq(x, y), mso::leq(y, x));
}

Formula lt(const std::string& x, const std::string& y) { return conj(mso::leq(x, y), neg(eq(x, y))); }

Formula edge_any(const std::string& x, const std::string& y, int maxrk) {
  std::vector<Formula> fs;
  for (int i = 1; i <= maxrk; ++i) fs.push_back(mso::edge(i, x, y));
  return or_b_all(fs);
}

Formula root(const std::string& x, int maxrk) {
  std::string y = fo("r");
  return mso::forall(y, neg(edge_any(y, x, maxrk)));
}

std::vector<std::vector<int>> words(int maxrk, int length) {
  if (length < 0) return {};
  double total = 1;
  for (int i = 0; i < length; ++i) total *= std::max(maxrk, 0);
  if (total > 200000) throw ExplosionGuard("too many child words of length " + std::to_string(length));
  std::vector<std::vector<int>> out;
  std::vector<int> w(static_cast<size_t>(length), 1);
  if (length > 0 && maxrk < 1) return out;
  for (;;) {
    out.push_back(w);
    int i = length - 1;
    while (i >= 0 && w[static_cast<size_t>(i)] == maxrk) w[static_cast<size_t>(i--)] = 1;
    if (i < 0) break;
    ++w[static_cast<size_t>(i)];
  }
  return out;
}

Formula path_w(const Names& ys, const std::vector<int>& w) {
  if (ys.size() != w.size() + 1) throw BadMacroParams("path needs one more variable than letters");
  std::vector<Formula> fs;
  for (size_t i = 0; i < w.size(); ++i) fs.push_back(mso::edge(w[i], ys[i], ys[i + 1]));
  return conj_list(fs);
}

Formula path(const Names& ys, int maxrk) {
  if (ys.empty()) throw BadMacroParams("path needs at least one variable");
  std::vector<Formula> fs;
  for (const auto& w : words(maxrk, static_cast<int>(ys.size()) - 1)) fs.push_back(path_w(ys, w));
  return or_b_all(fs);
}

Formula at_offset(const std::string& x, const std::string& y, const std::vector<int>& w) {
  Names ys;
  for (size_t i = 0; i <= w.size(); ++i) ys.push_back(fo("p"));
  Formula body = conj(conj(eq(x, ys.front()), path_w(ys, w)), eq(ys.back(), y));
  return exists_b(ys, body);
}

Formula desc_range(const std::string& x, const std::string& y, int i, int j, int maxrk) {
  if (i < 0 || j < i) throw BadMacroParams("desc range needs 0 <= i <= j");
  std::vector<Formula> fs;
  for (int len = i; len <= j; ++len)
    for (const auto& w : words(maxrk, len)) fs.push_back(at_offset(x, y, w));
  return or_b_all(fs);
}

Formula desc_exact(const std::string& x, const std::string& y, int i, int maxrk) {
  return desc_range(x, y, i, i, maxrk);
}

Formula depth_gt(const std::string& y, int n, int maxrk) {
  if (n < 0) throw BadMacroParams("depth bound must be non-negative");
  std::string x = fo("d");
  return exists_b(x, desc_exact(x, y, n + 1, maxrk));
}

Formula ancestor_in(const std::string& y, int n, const std::string& X, int maxrk) {
  if (n < 0) throw BadMacroParams("ancestor distance must be non-negative");
  std::string x = fo("a");
  return exists_b(x, conj(mso::in(x, X), desc_exact(x, y, n, maxrk)));
}

Formula depth_in(int m, const std::string& X, int maxrk) {
  if (m < 0) throw BadMacroParams("depth must be non-negative");
  std::string x = fo("r"), y = fo("d");
  return exists_b(Names{x, y}, conj(conj(root(x, maxrk), desc_exact(x, y, m, maxrk)), mso::in(y, X)));
}

Formula mod_expanded(const std::string& x, int n, int m, int maxrk) {
  if (n < 1 || m < 0 || m >= n) throw BadMacroParams("mod needs n >= 1 and 0 <= m < n");
  std::string X = fresh_name("M"), y = fo("c");
  // The closure step goes up from every y of depth at least n.
  Formula step = implies_b(conj(mso::in(y, X), depth_gt(y, n - 1, maxrk)), ancestor_in(y, n, X, maxrk));
  Formula premise = conj(mso::in(x, X), mso::forall(y, step));
  return mso::forall(X, implies_b(premise, depth_in(m, X, maxrk)));
}

Formula base(const std::string& y, const std::string& x, int n, int maxrk) {
  if (n < 1) throw BadMacroParams("base needs n >= 1");
  std::vector<Formula> fs;
  for (int q = 0; q < n; ++q) fs.push_back(implies_b(mso::mod(x, n, q), desc_exact(y, x, q, maxrk)));
  return conj_list(fs);
}

Formula check(const Tree& slice, const std::string& x, const Names& ys, int maxrk) {
  std::vector<Formula> fs;
  std::vector<std::pair<int, std::vector<int>>> vars;
  std::vector<int> path;
  std::function<void(const Tree&)> go = [&](const Tree& s) {
    if (int i = variable_index(s.symbol); i > 0 && s.children.empty()) {
      vars.emplace_back(i, path);
      return;
    }
    std::string y = fo("s");
    fs.push_back(exists_b(y, conj(at_offset(x, y, path), mso::label(s.symbol, y))));
    for (size_t c = 0; c < s.children.size(); ++c) {
      path.push_back(static_cast<int>(c) + 1);
      go(s.children[c]);
      path.pop_back();
    }
  };
  go(slice);
  std::sort(vars.begin(), vars.end());
  if (vars.size() != ys.size()) throw BadMacroParams("check needs one variable per slice variable");
  for (size_t i = 0; i < vars.size(); ++i) {
    if (vars[i].first != static_cast<int>(i) + 1)
      throw BadMacroParams("slice variables must be z1..zk");
    fs.push_back(at_offset(x, ys[i], vars[i].second));
  }
  (void)maxrk;
  return conj_list(fs);
}

Formula desc(const std::string& x, const std::string& y, int maxrk) {
  std::string z = fo("z"), z1 = fo("z"), z2 = fo("z");
  std::vector<Formula> branch;
  for (int i = 1; i <= maxrk; ++i)
    for (int j = i + 1; j <= maxrk; ++j)
      branch.push_back(conj(mso::edge(i, z, z1), mso::edge(j, z, z2)));
  Formula split = conj(conj(conj(or_b_all(branch), mso::leq(z1, x)), lt(x, z2)), mso::leq(z2, y));
  return conj(mso::leq(x, y), neg(exists_b(Names{z, z1, z2}, split)));
}

Formula desc_plus(const std::string& x, const std::string& y, int maxrk) {
  return conj(desc(x, y, maxrk), neg(eq(x, y)));
}

Formula desc_set(const std::string& x, const std::string& Y, int maxrk) {
  std::string y = fo("e");
  return mso::forall(y, implies_b(mso::in(y, Y), desc(x, y, maxrk)));
}

Formula sibl(const std::string& x, const std::string& y, int maxrk) {
  std::string z = fo("p");
  std::vector<Formula> fs;
  for (int i = 1; i <= maxrk; ++i)
    for (int j = i + 1; j <= maxrk; ++j) fs.push_back(conj(mso::edge(i, z, x), mso::edge(j, z, y)));
  return exists_b(z, or_b_all(fs));
}

Formula sibl_plus(const std::string& x, const std::string& y, int maxrk) {
  std::string a = fo("u"), b = fo("u");
  return exists_b(Names{a, b}, conj(conj(sibl(a, b, maxrk), desc(a, x, maxrk)), desc(b, y, maxrk)));
}

Formula sibl_n(int n, const std::string& x, const std::string& y, int maxrk) {
  if (n < 1) throw BadMacroParams("sibl_n needs n >= 1");
  std::string a = fo("u"), b = fo("u");
  return exists_b(Names{a, b}, conj(conj(sibl(a, b, maxrk), desc_exact(a, x, n - 1, maxrk)),
                                    desc_exact(b, y, n - 1, maxrk)));
}

Formula fork(const std::string& X, const std::string& y, const Names& zs, int maxrk) {
  std::vector<Formula> fs;
  for (const auto& z : zs) fs.push_back(conj(mso::in(z, X), desc_plus(y, z, maxrk)));
  for (size_t i = 0; i + 1 < zs.size(); ++i) fs.push_back(sibl_plus(zs[i], zs[i + 1], maxrk));
  std::string w = fo("w");
  std::vector<Formula> covers;
  for (const auto& z : zs) covers.push_back(desc(z, w, maxrk));
  fs.push_back(mso::forall(w, implies_b(conj(mso::in(w, X), desc_plus(y, w, maxrk)), or_b_all(covers))));
  return conj_list(fs);
}

Formula height_geq(const std::string& x, int n, int maxrk) {
  if (n < 0) throw BadMacroParams("height bound must be non-negative");
  std::string z = fo("h");
  return exists_b(z, desc_exact(x, z, n, maxrk));
}

Formula form_cut(int n, const std::string& x, const Names& ys, int maxrk) {
  if (n < 1) throw BadMacroParams("form_cut needs n >= 1");
  std::vector<Formula> fs;
  for (const auto& y : ys) fs.push_back(conj(desc_exact(x, y, n, maxrk), height_geq(y, n, maxrk)));
  // Adjacent cut positions are ordered incomparable positions; two of them
  // may share an ancestor below x, so sibl_n would be too strong here.
  for (size_t i = 0; i + 1 < ys.size(); ++i) fs.push_back(sibl_plus(ys[i], ys[i + 1], maxrk));
  std::string z = fo("c");
  std::vector<Formula> hits;
  for (const auto& y : ys) hits.push_back(eq(z, y));
  fs.push_back(mso::forall(
      z, implies_b(conj(desc_exact(x, z, n, maxrk), height_geq(z, n, maxrk)), or_b_all(hits))));
  return conj_list(fs);
}

Formula form_lmp(const Names& ys, int maxrk) {
  if (ys.empty()) throw BadMacroParams("form_lmp needs at least one variable");
  std::string z = fo("l");
  int len = static_cast<int>(ys.size()) - 1;
  return conj(path(ys, maxrk),
              mso::forall(z, implies_b(desc_exact(ys.front(), z, len, maxrk), mso::leq(ys.back(), z))));
}

Formula on_lmp(int len, const std::string& x, const std::string& y, int maxrk) {
  if (len < 0) throw BadMacroParams("on_lmp needs a non-negative length");
  Names ys;
  for (int i = 0; i <= len; ++i) ys.push_back(fo("l"));
  std::vector<Formula> hits;
  for (const auto& v : ys) hits.push_back(eq(v, y));
  return exists_b(ys, conj(conj(eq(x, ys.front()), form_lmp(ys, maxrk)), or_b_all(hits)));
}

Formula progress_tuple(const Formula& psi, const std::string& px, const std::string& py,
                       const std::string& x, const Names& ys, int maxrk) {
  std::vector<Formula> fs;
  for (const auto& y : ys) fs.push_back(rename_free(psi, {{px, x}, {py, y}}));
  for (size_t i = 0; i + 1 < ys.size(); ++i) fs.push_back(sibl_plus(ys[i], ys[i + 1], maxrk));
  return conj_list(fs);
}

// ---------------------------------------------------------------------------
// Registry

namespace {

int int_param(const std::vector<std::string>& p, size_t i, const char* what) {
  if (i >= p.size()) throw BadMacroParams(std::string("missing parameter ") + what);
  const std::string& s = p[i];
  if (s.empty() || s.size() > 6 ||
      !std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); }))
    throw BadMacroParams(std::string("parameter ") + what + " must be a non-negative integer");
  return std::stoi(s);
}

std::vector<int> word_param(const std::vector<std::string>& p, size_t i) {
  if (i >= p.size()) throw BadMacroParams("missing word parameter");
  try {
    return parse_position(p[i]).path();
  } catch (const InvalidInput& e) {
    throw BadMacroParams(e.what());
  }
}

// A word whose letters are child indices available in sigma.
std::vector<int> checked_word(const RankedAlphabet& sigma, const std::vector<std::string>& p, size_t i) {
  auto w = word_param(p, i);
  for (int c : w)
    if (c > sigma.max_rank())
      throw BadMacroParams("child index " + std::to_string(c) + " exceeds the maximal rank " +
                           std::to_string(sigma.max_rank()));
  return w;
}

Names numbered(const std::string& stem, int from, int count) {
  Names out;
  for (int i = 0; i < count; ++i) out.push_back(stem + std::to_string(from + i));
  return out;
}

Names cat(Names a, const Names& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

// Relations on an indexed tree used by the oracles.
struct Rel {
  const IndexedTree& t;
  bool anc(uint32_t u, uint32_t v) const { return t.is_ancestor_or_self(u, v); }
  bool sanc(uint32_t u, uint32_t v) const { return u != v && anc(u, v); }
  int rel_depth(uint32_t u, uint32_t v) const { return t.depth(v) - t.depth(u); }
  bool incomparable_before(uint32_t u, uint32_t v) const { return !anc(u, v) && !anc(v, u) && u < v; }
  bool in(uint32_t v, uint32_t X) const { return v < 32 && ((X >> v) & 1u); }
  bool child(uint32_t u, uint32_t v, int i) const {
    return t.parent(v) == static_cast<int>(u) && t.child_index(v) == i;
  }
  std::optional<uint32_t> lmp_end(uint32_t u, int len) const {
    for (uint32_t v = u; v < t.end(u); ++v)
      if (rel_depth(u, v) == len) return v;  // preorder finds the lexicographic minimum
    return std::nullopt;
  }
};

Formula sample_phi(const RankedAlphabet& sigma, const std::string& x) {
  return mso::label(sigma.entries().begin()->first, x);
}

std::vector<MacroSpec> make_catalog() {
  std::vector<MacroSpec> c;
  using P = std::vector<std::string>;
  using A = std::vector<uint32_t>;
  auto fixed = [](Names n) { return [n](const P&) { return n; }; };
  auto none = [](const RankedAlphabet&) { return std::vector<P>{P{}}; };

  c.push_back({"implies", "", "weighted implication label_a(x) -> edge_1(x,y)", 0, fixed({"x", "y"}),
               [](const RankedAlphabet& s, const P&, const Names& a) {
                 return implies_w(sample_phi(s, a[0]), mso::edge(1, a[0], a[1]));
               },
               [](const RankedAlphabet& s, const P&, const IndexedTree& t, const A& a) {
                 return t.label(a[0]) != s.entries().begin()->first || Rel{t}.child(a[0], a[1], 1);
               },
               none});
  c.push_back({"implies_b", "", "Boolean implication label_a(x) -> edge_1(x,y)", 0, fixed({"x", "y"}),
               [](const RankedAlphabet& s, const P&, const Names& a) {
                 return implies_b(sample_phi(s, a[0]), mso::edge(1, a[0], a[1]));
               },
               [](const RankedAlphabet& s, const P&, const IndexedTree& t, const A& a) {
                 return t.label(a[0]) != s.entries().begin()->first || Rel{t}.child(a[0], a[1], 1);
               },
               none});
  c.push_back({"or_b", "", "Boolean disjunction label_a(x) or edge_1(x,y)", 0, fixed({"x", "y"}),
               [](const RankedAlphabet& s, const P&, const Names& a) {
                 return or_b(sample_phi(s, a[0]), mso::edge(1, a[0], a[1]));
               },
               [](const RankedAlphabet& s, const P&, const IndexedTree& t, const A& a) {
                 return t.label(a[0]) == s.entries().begin()->first || Rel{t}.child(a[0], a[1], 1);
               },
               none});
  c.push_back({"exists_b", "", "Boolean existential: x has a first child", 0, fixed({"x"}),
               [](const RankedAlphabet&, const P&, const Names& a) {
                 std::string y = fresh_name("y");
                 return exists_b(y, mso::edge(1, a[0], y));
               },
               [](const RankedAlphabet&, const P&, const IndexedTree& t, const A& a) {
                 return !t.children(a[0]).empty();
               },
               none});
  c.push_back({"exists_b_set", "", "Boolean set existential: some set separates x from y", 0,
               fixed({"x", "y"}),
               [](const RankedAlphabet&, const P&, const Names& a) {
                 std::string X = fresh_name("S");
                 return exists_b(X, mso::conj(mso::in(a[0], X), mso::neg(mso::in(a[1], X))));
               },
               [](const RankedAlphabet&, const P&, const IndexedTree&, const A& a) { return a[0] != a[1]; },
               none});
  c.push_back({"eq", "", "x = y", 0, fixed({"x", "y"}),
               [](const RankedAlphabet&, const P&, const Names& a) { return eq(a[0], a[1]); },
               [](const RankedAlphabet&, const P&, const IndexedTree&, const A& a) { return a[0] == a[1]; },
               none});
  c.push_back({"lt", "", "x strictly before y", 0, fixed({"x", "y"}),
               [](const RankedAlphabet&, const P&, const Names& a) { return lt(a[0], a[1]); },
               [](const RankedAlphabet&, const P&, const IndexedTree&, const A& a) { return a[0] < a[1]; },
               none});
  c.push_back({"edge", "", "y is some child of x", 0, fixed({"x", "y"}),
               [](const RankedAlphabet& s, const P&, const Names& a) {
                 return edge_any(a[0], a[1], s.max_rank());
               },
               [](const RankedAlphabet&, const P&, const IndexedTree& t, const A& a) {
                 return t.parent(a[1]) == static_cast<int>(a[0]);
               },
               none});
  c.push_back({"root", "", "x is the root", 0, fixed({"x"}),
               [](const RankedAlphabet& s, const P&, const Names& a) { return root(a[0], s.max_rank()); },
               [](const RankedAlphabet&, const P&, const IndexedTree&, const A& a) { return a[0] == 0; },
               none});
  c.push_back({"path_w", "W", "downward path spelling the word W (e.g. 1.2)", 1,
               [](const P& p) { return numbered("y", 0, static_cast<int>(word_param(p, 0).size()) + 1); },
               [](const RankedAlphabet& s, const P& p, const Names& a) { return path_w(a, checked_word(s, p, 0)); },
               [](const RankedAlphabet&, const P& p, const IndexedTree& t, const A& a) {
                 auto w = word_param(p, 0);
                 for (size_t i = 0; i < w.size(); ++i)
                   if (!Rel{t}.child(a[i], a[i + 1], w[i])) return false;
                 return true;
               },
               [](const RankedAlphabet&) { return std::vector<P>{{"e"}, {"1"}, {"2"}, {"1.2"}, {"2.1.1"}}; }});
  c.push_back({"path", "N", "downward path of N edges", 1,
               [](const P& p) { return numbered("y", 0, int_param(p, 0, "N") + 1); },
               [](const RankedAlphabet& s, const P&, const Names& a) { return path(a, s.max_rank()); },
               [](const RankedAlphabet&, const P&, const IndexedTree& t, const A& a) {
                 for (size_t i = 1; i < a.size(); ++i)
                   if (t.parent(a[i]) != static_cast<int>(a[i - 1])) return false;
                 return true;
               },
               [](const RankedAlphabet&) { return std::vector<P>{{"0"}, {"1"}, {"2"}, {"3"}}; }});
  c.push_back({"at_offset", "W", "y = x.W", 1, fixed({"x", "y"}),
               [](const RankedAlphabet& s, const P& p, const Names& a) { return at_offset(a[0], a[1], checked_word(s, p, 0)); },
               [](const RankedAlphabet&, const P& p, const IndexedTree& t, const A& a) {
                 auto v = t.follow(a[0], word_param(p, 0));
                 return v && *v == a[1];
               },
               [](const RankedAlphabet&) { return std::vector<P>{{"e"}, {"1"}, {"2.1"}, {"1.1.2"}}; }});
  c.push_back({"desc_range", "I J", "y = x.w with I <= |w| <= J", 2, fixed({"x", "y"}),
               [](const RankedAlphabet& s, const P& p, const Names& a) {
                 return desc_range(a[0], a[1], int_param(p, 0, "I"), int_param(p, 1, "J"), s.max_rank());
               },
               [](const RankedAlphabet&, const P& p, const IndexedTree& t, const A& a) {
                 int d = Rel{t}.rel_depth(a[0], a[1]);
                 return Rel{t}.anc(a[0], a[1]) && d >= int_param(p, 0, "I") && d <= int_param(p, 1, "J");
               },
               [](const RankedAlphabet&) {
                 return std::vector<P>{{"0", "0"}, {"0", "1"}, {"1", "2"}, {"2", "2"}, {"1", "4"}};
               }});
  c.push_back({"desc_exact", "I", "y = x.w with |w| = I", 1, fixed({"x", "y"}),
               [](const RankedAlphabet& s, const P& p, const Names& a) {
                 return desc_exact(a[0], a[1], int_param(p, 0, "I"), s.max_rank());
               },
               [](const RankedAlphabet&, const P& p, const IndexedTree& t, const A& a) {
                 return Rel{t}.anc(a[0], a[1]) && Rel{t}.rel_depth(a[0], a[1]) == int_param(p, 0, "I");
               },
               [](const RankedAlphabet&) { return std::vector<P>{{"0"}, {"1"}, {"2"}, {"3"}}; }});
  c.push_back({"depth_gt", "N", "|y| > N", 1, fixed({"y"}),
               [](const RankedAlphabet& s, const P& p, const Names& a) {
                 return depth_gt(a[0], int_param(p, 0, "N"), s.max_rank());
               },
               [](const RankedAlphabet&, const P& p, const IndexedTree& t, const A& a) {
                 return t.depth(a[0]) > int_param(p, 0, "N");
               },
               [](const RankedAlphabet&) { return std::vector<P>{{"0"}, {"1"}, {"2"}}; }});
  c.push_back({"ancestor_in", "N", "y/N in X", 1, fixed({"y", "X"}),
               [](const RankedAlphabet& s, const P& p, const Names& a) {
                 return ancestor_in(a[0], int_param(p, 0, "N"), a[1], s.max_rank());
               },
               [](const RankedAlphabet&, const P& p, const IndexedTree& t, const A& a) {
                 int n = int_param(p, 0, "N");
                 return t.depth(a[0]) >= n && Rel{t}.in(static_cast<uint32_t>(t.ancestor(a[0], n)), a[1]);
               },
               [](const RankedAlphabet&) { return std::vector<P>{{"0"}, {"1"}, {"2"}}; }});
  c.push_back({"depth_in", "M", "M in |X|", 1, fixed({"X"}),
               [](const RankedAlphabet& s, const P& p, const Names& a) {
                 return depth_in(int_param(p, 0, "M"), a[0], s.max_rank());
               },
               [](const RankedAlphabet&, const P& p, const IndexedTree& t, const A& a) {
                 for (uint32_t v = 0; v < t.size(); ++v)
                   if (Rel{t}.in(v, a[0]) && t.depth(v) == int_param(p, 0, "M")) return true;
                 return false;
               },
               [](const RankedAlphabet&) { return std::vector<P>{{"0"}, {"1"}, {"3"}}; }});
  auto mod_oracle = [](const RankedAlphabet&, const P& p, const IndexedTree& t, const A& a) {
    return t.depth(a[0]) % int_param(p, 0, "N") == int_param(p, 1, "M");
  };
  auto mod_samples = [](const RankedAlphabet&) {
    return std::vector<P>{{"1", "0"}, {"2", "0"}, {"2", "1"}, {"3", "0"}, {"3", "2"}};
  };
  c.push_back({"mod", "N M", "|x| = M mod N, as a primitive node", 2, fixed({"x"}),
               [](const RankedAlphabet&, const P& p, const Names& a) {
                 return mso::mod(a[0], int_param(p, 0, "N"), int_param(p, 1, "M"));
               },
               mod_oracle, mod_samples});
  c.push_back({"mod_expanded", "N M", "|x| = M mod N, expanded", 2, fixed({"x"}),
               [](const RankedAlphabet& s, const P& p, const Names& a) {
                 return mod_expanded(a[0], int_param(p, 0, "N"), int_param(p, 1, "M"), s.max_rank());
               },
               mod_oracle, mod_samples});
  c.push_back({"base", "N", "y = <x>_N", 1, fixed({"y", "x"}),
               [](const RankedAlphabet& s, const P& p, const Names& a) {
                 return base(a[0], a[1], int_param(p, 0, "N"), s.max_rank());
               },
               [](const RankedAlphabet&, const P& p, const IndexedTree& t, const A& a) {
                 return a[0] == t.ancestor(a[1], t.depth(a[1]) % int_param(p, 0, "N"));
               },
               [](const RankedAlphabet&) { return std::vector<P>{{"1"}, {"2"}, {"3"}}; }});
  c.push_back({"check", "SLICE", "the slice matches at x with its variables at ys", 1,
               [](const P& p) {
                 if (p.empty()) throw BadMacroParams("missing slice parameter");
                 return cat({"x"}, numbered("y", 1, static_cast<int>(variable_positions(parse_tree(p[0])).size())));
               },
               [](const RankedAlphabet& s, const P& p, const Names& a) {
                 return check(parse_tree(p[0]), a[0], Names(a.begin() + 1, a.end()), s.max_rank());
               },
               [](const RankedAlphabet&, const P& p, const IndexedTree& t, const A& a) {
                 Tree z = parse_tree(p[0]);
                 bool ok = true;
                 std::vector<int> path;
                 std::function<void(const Tree&)> go = [&](const Tree& s) {
                   auto v = t.follow(a[0], path);
                   if (!v) {
                     ok = false;
                     return;
                   }
                   if (int i = variable_index(s.symbol); i > 0 && s.children.empty()) {
                     if (a[static_cast<size_t>(i)] != *v) ok = false;
                     return;
                   }
                   if (t.label(*v) != s.symbol) ok = false;
                   for (size_t ch = 0; ch < s.children.size(); ++ch) {
                     path.push_back(static_cast<int>(ch) + 1);
                     go(s.children[ch]);
                     path.pop_back();
                   }
                 };
                 go(z);
                 return ok;
               },
               [](const RankedAlphabet& s) {
                 std::vector<P> out;
                 for (int k = 0; k <= std::min(2, max_slice_arity(s, 1)); ++k)
                   for (const auto& sl : enumerate_slices(s, 1, k)) out.push_back({render_tree(sl.body)});
                 auto two = enumerate_slices(s, 2, std::min(1, max_slice_arity(s, 2)));
                 for (size_t i = 0; i < two.size(); i += 3) out.push_back({render_tree(two[i].body)});
                 return out;
               }});
  c.push_back({"desc", "", "x is an ancestor-or-self of y", 0, fixed({"x", "y"}),
               [](const RankedAlphabet& s, const P&, const Names& a) { return desc(a[0], a[1], s.max_rank()); },
               [](const RankedAlphabet&, const P&, const IndexedTree& t, const A& a) { return Rel{t}.anc(a[0], a[1]); },
               none});
  c.push_back({"desc_plus", "", "x is a proper ancestor of y", 0, fixed({"x", "y"}),
               [](const RankedAlphabet& s, const P&, const Names& a) { return desc_plus(a[0], a[1], s.max_rank()); },
               [](const RankedAlphabet&, const P&, const IndexedTree& t, const A& a) { return Rel{t}.sanc(a[0], a[1]); },
               none});
  c.push_back({"desc_set", "", "every position of Y is below x", 0, fixed({"x", "Y"}),
               [](const RankedAlphabet& s, const P&, const Names& a) { return desc_set(a[0], a[1], s.max_rank()); },
               [](const RankedAlphabet&, const P&, const IndexedTree& t, const A& a) {
                 for (uint32_t v = 0; v < t.size(); ++v)
                   if (Rel{t}.in(v, a[1]) && !Rel{t}.anc(a[0], v)) return false;
                 return true;
               },
               none});
  c.push_back({"sibl", "", "x and y are siblings, x first", 0, fixed({"x", "y"}),
               [](const RankedAlphabet& s, const P&, const Names& a) { return sibl(a[0], a[1], s.max_rank()); },
               [](const RankedAlphabet&, const P&, const IndexedTree& t, const A& a) {
                 return a[0] != 0 && a[1] != 0 && t.parent(a[0]) == t.parent(a[1]) &&
                        t.child_index(a[0]) < t.child_index(a[1]);
               },
               none});
  c.push_back({"sibl_plus", "", "x and y are incomparable, x first", 0, fixed({"x", "y"}),
               [](const RankedAlphabet& s, const P&, const Names& a) { return sibl_plus(a[0], a[1], s.max_rank()); },
               [](const RankedAlphabet&, const P&, const IndexedTree& t, const A& a) {
                 return Rel{t}.incomparable_before(a[0], a[1]);
               },
               none});
  c.push_back({"sibl_n", "N", "x, y descend N-1 levels from ordered siblings", 1, fixed({"x", "y"}),
               [](const RankedAlphabet& s, const P& p, const Names& a) {
                 return sibl_n(int_param(p, 0, "N"), a[0], a[1], s.max_rank());
               },
               [](const RankedAlphabet&, const P& p, const IndexedTree& t, const A& a) {
                 int n = int_param(p, 0, "N");
                 if (n < 1 || t.depth(a[0]) < n || t.depth(a[1]) < n) return false;
                 size_t u = t.ancestor(a[0], n - 1), v = t.ancestor(a[1], n - 1);
                 return t.parent(u) == t.parent(v) && t.child_index(u) < t.child_index(v);
               },
               [](const RankedAlphabet&) { return std::vector<P>{{"1"}, {"2"}}; }});
  c.push_back({"fork", "K", "<y, z1..zK> is a fork of X", 1,
               [](const P& p) { return cat({"X", "y"}, numbered("z", 1, int_param(p, 0, "K"))); },
               [](const RankedAlphabet& s, const P&, const Names& a) {
                 return fork(a[0], a[1], Names(a.begin() + 2, a.end()), s.max_rank());
               },
               [](const RankedAlphabet&, const P&, const IndexedTree& t, const A& a) {
                 Rel r{t};
                 uint32_t X = a[0], y = a[1];
                 for (size_t i = 2; i < a.size(); ++i)
                   if (!r.in(a[i], X) || !r.sanc(y, a[i])) return false;
                 for (size_t i = 2; i + 1 < a.size(); ++i)
                   if (!r.incomparable_before(a[i], a[i + 1])) return false;
                 for (uint32_t w = 0; w < t.size(); ++w) {
                   if (!r.in(w, X) || !r.sanc(y, w)) continue;
                   bool covered = false;
                   for (size_t i = 2; i < a.size(); ++i) covered = covered || r.anc(a[i], w);
                   if (!covered) return false;
                 }
                 return true;
               },
               [](const RankedAlphabet&) { return std::vector<P>{{"0"}, {"1"}, {"2"}}; }});
  c.push_back({"form_cut", "N K", "y1..yK is the N-cut below x", 2,
               [](const P& p) { return cat({"x"}, numbered("y", 1, int_param(p, 1, "K"))); },
               [](const RankedAlphabet& s, const P& p, const Names& a) {
                 return form_cut(int_param(p, 0, "N"), a[0], Names(a.begin() + 1, a.end()), s.max_rank());
               },
               [](const RankedAlphabet&, const P& p, const IndexedTree& t, const A& a) {
                 HeadCut hc = head_cut(t.tree(), t.position(a[0]), int_param(p, 0, "N"));
                 if (hc.cut.size() + 1 != a.size()) return false;
                 for (size_t i = 0; i < hc.cut.size(); ++i)
                   if (t.position(a[i + 1]) != hc.cut[i]) return false;
                 return true;
               },
               [](const RankedAlphabet& s) {
                 std::vector<P> out;
                 for (int n = 1; n <= 2; ++n)
                   for (int k = 0; k <= std::min(3, max_slice_arity(s, n)); ++k)
                     out.push_back({std::to_string(n), std::to_string(k)});
                 return out;
               }});
  c.push_back({"form_lmp", "N", "y1..yN is the leftmost path of N-1 edges from y1", 1,
               [](const P& p) { return numbered("y", 1, std::max(1, int_param(p, 0, "N"))); },
               [](const RankedAlphabet& s, const P&, const Names& a) { return form_lmp(a, s.max_rank()); },
               [](const RankedAlphabet&, const P&, const IndexedTree& t, const A& a) {
                 for (size_t i = 1; i < a.size(); ++i)
                   if (t.parent(a[i]) != static_cast<int>(a[i - 1])) return false;
                 auto e = Rel{t}.lmp_end(a[0], static_cast<int>(a.size()) - 1);
                 return e && *e == a.back();
               },
               [](const RankedAlphabet&) { return std::vector<P>{{"1"}, {"2"}, {"3"}}; }});
  c.push_back({"height_geq", "N", "the subtree at x has height at least N", 1, fixed({"x"}),
               [](const RankedAlphabet& s, const P& p, const Names& a) {
                 return height_geq(a[0], int_param(p, 0, "N"), s.max_rank());
               },
               [](const RankedAlphabet&, const P& p, const IndexedTree& t, const A& a) {
                 return t.height(a[0]) >= int_param(p, 0, "N");
               },
               [](const RankedAlphabet&) { return std::vector<P>{{"0"}, {"1"}, {"2"}, {"3"}}; }});
  c.push_back({"on_lmp", "L", "y is on the leftmost path of L edges below x", 1, fixed({"x", "y"}),
               [](const RankedAlphabet& s, const P& p, const Names& a) {
                 return on_lmp(int_param(p, 0, "L"), a[0], a[1], s.max_rank());
               },
               [](const RankedAlphabet&, const P& p, const IndexedTree& t, const A& a) {
                 auto e = Rel{t}.lmp_end(a[0], int_param(p, 0, "L"));
                 return e && Rel{t}.anc(a[0], a[1]) && Rel{t}.anc(a[1], *e);
               },
               [](const RankedAlphabet&) { return std::vector<P>{{"0"}, {"1"}, {"2"}}; }});
  c.push_back({"progress_tuple", "PSI K", "psi(x,yi) for all i and yi, yi+1 ordered incomparable; "
                                          "PSI is desc_plus or bounded:N", 2,
               [](const P& p) { return cat({"x"}, numbered("y", 1, int_param(p, 1, "K"))); },
               [](const RankedAlphabet& s, const P& p, const Names& a) {
                 Formula psi;
                 if (p[0] == "desc_plus") {
                   psi = desc_plus("x", "y", s.max_rank());
                 } else if (p[0].rfind("bounded:", 0) == 0) {
                   psi = desc_range("x", "y", 1, int_param({p[0].substr(8)}, 0, "N"), s.max_rank());
                 } else {
                   throw BadMacroParams("PSI must be desc_plus or bounded:N");
                 }
                 return progress_tuple(psi, "x", "y", a[0], Names(a.begin() + 1, a.end()), s.max_rank());
               },
               [](const RankedAlphabet&, const P& p, const IndexedTree& t, const A& a) {
                 Rel r{t};
                 int bound = p[0] == "desc_plus" ? 1 << 30 : int_param({p[0].substr(8)}, 0, "N");
                 for (size_t i = 1; i < a.size(); ++i)
                   if (!r.sanc(a[0], a[i]) || r.rel_depth(a[0], a[i]) > bound) return false;
                 for (size_t i = 1; i + 1 < a.size(); ++i)
                   if (!r.incomparable_before(a[i], a[i + 1])) return false;
                 return true;
               },
               [](const RankedAlphabet&) {
                 return std::vector<P>{{"desc_plus", "1"}, {"desc_plus", "2"}, {"bounded:2", "2"}, {"bounded:1", "3"}};
               }});
  return c;
}

}  // namespace

const std::vector<MacroSpec>& catalog() {
  static const std::vector<MacroSpec> c = make_catalog();
  return c;
}

const MacroSpec& find(const std::string& name) {
  for (const auto& m : catalog())
    if (m.name == name) return m;
  throw BadMacroParams("unknown macro '" + name + "'");
}

Formula build(const std::string& name, const RankedAlphabet& sigma,
              const std::vector<std::string>& params, const Names& args) {
  const MacroSpec& m = find(name);
  if (params.size() != m.param_count)
    throw BadMacroParams("macro '" + name + "' takes " + std::to_string(m.param_count) +
                         " parameter(s): " + m.params_help);
  Names defaults = m.args(params);
  const Names& use = args.empty() ? defaults : args;
  if (use.size() != defaults.size())
    throw BadMacroParams("macro '" + name + "' takes " + std::to_string(defaults.size()) +
                         " argument(s)");
  for (size_t i = 0; i < use.size(); ++i)
    if (is_so_variable(use[i]) != is_so_variable(defaults[i]))
      throw BadMacroParams("argument '" + use[i] + "' has the wrong variable order");
  try {
    return m.build(sigma, params, use);
  } catch (const InvalidInput& e) {
    throw BadMacroParams(e.what());
  }
}

bool oracle(const std::string& name, const RankedAlphabet& sigma,
            const std::vector<std::string>& params, const IndexedTree& tree,
            const std::vector<uint32_t>& args) {
  const MacroSpec& m = find(name);
  if (args.size() != m.args(params).size())
    throw BadMacroParams("wrong number of oracle arguments for '" + name + "'");
  return m.oracle(sigma, params, tree, args);
}

}  // namespace wtl::macros
