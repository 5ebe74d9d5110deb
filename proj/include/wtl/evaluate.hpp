#pragma once

#include "wtl/bool_engine.hpp"
#include "wtl/formula.hpp"
#include "wtl/semiring.hpp"
#include "wtl/tree.hpp"

#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

namespace wtl {

struct EvalOptions {
  size_t so_cap = 20;
  // Route Boolean subformulas through the compiled engine.
  bool boolean_fast_path = true;
};

// Assignment of positions and position sets to variable names.
struct Assignment {
  std::map<std::string, Position> fo;
  std::map<std::string, std::set<Position>> so;
};

// A tree over the extended alphabet: every position carries the set of
// variables from varset that point at it.
struct EncodedTree {
  Tree base;
  std::vector<std::string> varset;
  std::vector<std::set<std::string>> marks;  // indexed like positions(base)

  // Each first-order variable in varset marks exactly one position.
  bool valid() const;
};

EncodedTree encode(const Tree& t, const Assignment& a, const std::vector<std::string>& varset);
// Throws InvalidEncoding when the encoding is not valid.
std::pair<Tree, Assignment> decode(const EncodedTree& e);

// Weighted evaluator for one tree. Formula constants that are zero or one
// are read in the evaluator's semiring regardless of their weight kind.
class Evaluator {
 public:
  Evaluator(Semiring s, const IndexedTree& tree, EvalOptions opts = {},
            std::shared_ptr<BoolProgram> program = nullptr);

  Weight eval(const Formula& f, Env& env);
  // Boolean value of a BMSO formula.
  bool holds(const Formula& f, Env& env);

  const Semiring& semiring() const { return s_; }
  const IndexedTree& tree() const { return tree_; }
  BoolContext& engine() { return engine_; }

 private:
  Weight eval_rec(const FormulaNode& f, Env& env);
  uint32_t lookup(const std::string& name, const Env& env) const;
  bool atom_holds(const FormulaNode& f, Env& env) const;

  Semiring s_;
  const IndexedTree& tree_;
  EvalOptions opts_;
  BoolContext engine_;
};

// Semantics on an encoded tree; zero when the encoding is not valid.
Weight evaluate(const Semiring& s, const Formula& f, const EncodedTree& e, EvalOptions opts = {});
Weight evaluate(const Semiring& s, const Formula& f, const Tree& t, const Assignment& a,
                EvalOptions opts = {});

// Syntactic fragment membership.
FragmentSet fragment_of(const Formula& f);

enum class StepLogic { BMSO, BFOmod };

struct DnfTerm {
  Weight coefficient;
  Formula guard;  // conjunction of atoms and negated atoms
};

// Rewrites an L-step formula as a sum of coefficient-times-guard terms whose
// guards are mutually exclusive and cover every valid encoding. The result
// has 2^p terms for p distinct atoms; p above max_atoms raises ExplosionGuard.
std::vector<DnfTerm> step_dnf(const Semiring& s, const Formula& f, StepLogic logic = StepLogic::BMSO,
                              size_t max_atoms = 16);
// The formula sum over i of (a_i and guard_i).
Formula dnf_formula(const std::vector<DnfTerm>& terms, SemiringKind kind);
// The maximal L-subformulas of an L-step formula, without duplicates.
std::vector<Formula> step_atoms(const Formula& f, StepLogic logic);

}  // namespace wtl
