#pragma once

#include "wtl/formula.hpp"
#include "wtl/tree.hpp"

#include <functional>
#include <string>
#include <vector>

// Derived formulas. Arguments are variable names; bound variables are drawn
// from the fresh-name supply, so results can be nested without capture.
// Functions named *_b are the Boolean-valued variants built from negation,
// conjunction and universal quantification only.
namespace wtl::macros {

using Names = std::vector<std::string>;

// Boolean disjunction: not(not a and not b).
Formula or_b(Formula a, Formula b);
// Balanced Boolean disjunction; the empty one is 0.
Formula or_b_all(const std::vector<Formula>& fs);
// Boolean existential: not forall v. not f.
Formula exists_b(const std::string& v, Formula f);
Formula exists_b(const Names& vs, Formula f);
// Implication with the Boolean disjunction (stays inside BMSO).
Formula implies_b(Formula a, Formula b);
// Weighted implication: not a or (a and b).
Formula implies_w(Formula a, Formula b);

Formula eq(const std::string& x, const std::string& y);
Formula lt(const std::string& x, const std::string& y);
Formula edge_any(const std::string& x, const std::string& y, int maxrk);
Formula root(const std::string& x, int maxrk);

// ys[i] is the w[i]-th child of ys[i-1].
Formula path_w(const Names& ys, const std::vector<int>& w);
// ys is a downward path of length ys.size()-1.
Formula path(const Names& ys, int maxrk);
// y = x.w
Formula at_offset(const std::string& x, const std::string& y, const std::vector<int>& w);
// y = x.w for some w over [1..maxrk] with i <= |w| <= j.
Formula desc_range(const std::string& x, const std::string& y, int i, int j, int maxrk);
Formula desc_exact(const std::string& x, const std::string& y, int i, int maxrk);

// Depth of y exceeds n.
Formula depth_gt(const std::string& y, int n, int maxrk);
// The ancestor of y n levels up lies in X.
Formula ancestor_in(const std::string& y, int n, const std::string& X, int maxrk);
// X contains a position of depth m.
Formula depth_in(int m, const std::string& X, int maxrk);
// Depth of x is m modulo n, expanded into BMSO.
Formula mod_expanded(const std::string& x, int n, int m, int maxrk);
// y is the prefix of x of length floor(|x|/n)*n.
Formula base(const std::string& y, const std::string& x, int n, int maxrk);

// The slice matches at x and ys[i] sits at the position of z_{i+1}.
Formula check(const Tree& slice, const std::string& x, const Names& ys, int maxrk);

// Descendant-or-self, first-order definition.
Formula desc(const std::string& x, const std::string& y, int maxrk);
Formula desc_plus(const std::string& x, const std::string& y, int maxrk);
Formula desc_set(const std::string& x, const std::string& Y, int maxrk);

Formula sibl(const std::string& x, const std::string& y, int maxrk);
// x and y are incomparable and x comes first.
Formula sibl_plus(const std::string& x, const std::string& y, int maxrk);
// x and y descend, n-1 levels down, from adjacent-ordered siblings.
Formula sibl_n(int n, const std::string& x, const std::string& y, int maxrk);

// <y, zs> is a fork of X below y.
Formula fork(const std::string& X, const std::string& y, const Names& zs, int maxrk);
// ys is the n-cut below x.
Formula form_cut(int n, const std::string& x, const Names& ys, int maxrk);
// ys is the leftmost downward path of length ys.size()-1 from ys[0].
Formula form_lmp(const Names& ys, int maxrk);
Formula height_geq(const std::string& x, int n, int maxrk);
// y lies on the leftmost path of length len below x.
Formula on_lmp(int len, const std::string& x, const std::string& y, int maxrk);

// Conjunction of psi(x, ys[i]) and sibl_plus(ys[i], ys[i+1]); psi has free
// variables among {px, py}.
Formula progress_tuple(const Formula& psi, const std::string& px, const std::string& py,
                       const std::string& x, const Names& ys, int maxrk);

// Words over [1..maxrk] of the given length, in lexicographic order.
std::vector<std::vector<int>> words(int maxrk, int length);

// Named macro registry with a direct oracle per entry.
struct MacroSpec {
  std::string name;
  std::string params_help;
  std::string summary;
  size_t param_count = 0;
  // Default argument names for given parameters; uppercase names are sets.
  std::function<Names(const std::vector<std::string>&)> args;
  std::function<Formula(const RankedAlphabet&, const std::vector<std::string>&, const Names&)> build;
  // Arguments are preorder indices or bitmasks, in the order of args().
  std::function<bool(const RankedAlphabet&, const std::vector<std::string>&, const IndexedTree&,
                     const std::vector<uint32_t>&)>
      oracle;
  // Parameter instantiations used by exhaustive tests.
  std::function<std::vector<std::vector<std::string>>(const RankedAlphabet&)> samples;
};

const std::vector<MacroSpec>& catalog();
// Throws BadMacroParams for an unknown name.
const MacroSpec& find(const std::string& name);
Formula build(const std::string& name, const RankedAlphabet& sigma,
              const std::vector<std::string>& params, const Names& args = {});
bool oracle(const std::string& name, const RankedAlphabet& sigma,
            const std::vector<std::string>& params, const IndexedTree& tree,
            const std::vector<uint32_t>& args);

}  // namespace wtl::macros
