#pragma once

#include "wtl/semiring.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace wtl {

enum class FormulaKind : uint8_t {
  Const,
  Label,     // label_sym(x)
  Edge,      // edge_i(x, y): y is the i-th child of x
  Leq,       // x lexicographically at most y
  In,        // x in X
  Mod,       // |x| = m (mod n), kept as a node of its own
  Not,
  Or,
  And,
  ExistsFO,
  ForallFO,
  ExistsSO,
  ForallSO,
};

enum class Fragment : uint8_t {
  MSO,
  FO,
  BMSO,
  BFO,
  BFOmod,
  RMSO,
  BMSOStep,
  BFOmodStep,
};

class FragmentSet {
 public:
  FragmentSet() = default;
  explicit FragmentSet(uint16_t bits) : bits_(bits) {}
  bool contains(Fragment f) const { return (bits_ >> static_cast<int>(f)) & 1; }
  void insert(Fragment f) { bits_ |= static_cast<uint16_t>(1u << static_cast<int>(f)); }
  uint16_t bits() const { return bits_; }
  bool operator==(const FragmentSet&) const = default;

 private:
  uint16_t bits_ = 0;
};

std::string_view fragment_name(Fragment f);

class FormulaNode;
using Formula = std::shared_ptr<const FormulaNode>;

// Immutable formula node. Second-order variables are the names that start
// with an uppercase letter.
class FormulaNode {
 public:
  FormulaKind kind() const { return kind_; }
  const Weight& weight() const { return weight_; }          // Const
  const std::string& symbol() const { return symbol_; }     // Label
  int index() const { return index_; }                      // Edge child index, Mod modulus
  int residue() const { return residue_; }                  // Mod residue
  const std::string& var() const { return var1_; }          // atoms, binders
  const std::string& var2() const { return var2_; }         // Edge, Leq, In
  const Formula& sub() const { return left_; }              // Not, quantifiers
  const Formula& left() const { return left_; }
  const Formula& right() const { return right_; }

  // Sorted names of free variables.
  const std::vector<std::string>& free_vars() const { return free_; }
  FragmentSet fragments() const { return fragments_; }
  bool in(Fragment f) const { return fragments_.contains(f); }
  size_t hash() const { return hash_; }
  // Number of nodes counting shared subformulas once per occurrence.
  double tree_size() const { return size_; }

  // Internal constructor used by the factory functions below.
  FormulaNode(FormulaKind k, Weight w, std::string sym, int idx, int res, std::string v1,
              std::string v2, Formula l, Formula r);

 private:
  FormulaKind kind_;
  Weight weight_;
  std::string symbol_;
  int index_ = 0;
  int residue_ = 0;
  std::string var1_, var2_;
  Formula left_, right_;
  std::vector<std::string> free_;
  FragmentSet fragments_;
  size_t hash_ = 0;
  double size_ = 1;
};

bool is_so_variable(std::string_view name);
bool is_valid_variable(std::string_view name);

namespace mso {

Formula constant(const Weight& w);
Formula label(const std::string& symbol, const std::string& x);
Formula edge(int i, const std::string& x, const std::string& y);
Formula leq(const std::string& x, const std::string& y);
Formula in(const std::string& x, const std::string& X);
Formula mod(const std::string& x, int n, int m);
Formula neg(Formula f);
Formula disj(Formula a, Formula b);
Formula conj(Formula a, Formula b);
Formula exists(const std::string& v, Formula f);  // FO or SO by the variable's case
Formula forall(const std::string& v, Formula f);

// Balanced folds. An empty conjunction is the constant one of the weight
// kind given, an empty disjunction its zero.
Formula conj_all(const std::vector<Formula>& fs, SemiringKind kind = SemiringKind::Boolean);
Formula disj_all(const std::vector<Formula>& fs, SemiringKind kind = SemiringKind::Boolean);

// Constants 0 and 1 of the Boolean weight kind. The evaluator reads them
// as the zero and one of whatever semiring it runs over.
Formula zero();
Formula one();

}  // namespace mso

bool structurally_equal(const Formula& a, const Formula& b);

// Fresh variable names, unique within the process: stem'N.
std::string fresh_name(std::string_view stem);

// Simultaneous capture-avoiding renaming of free variables.
Formula rename_free(const Formula& f, const std::map<std::string, std::string>& renaming);

std::string to_sexpr(const Formula& f);
// Parses the s-expression syntax. Weights in (const W) are read in s.
Formula parse_formula(std::string_view text, const Semiring& s);

// Counts distinct nodes of the formula DAG.
size_t dag_size(const Formula& f);

}  // namespace wtl
