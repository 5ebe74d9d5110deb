#pragma once

#include "wtl/formula.hpp"
#include "wtl/tc.hpp"
#include "wtl/tree.hpp"

#include <map>
#include <set>
#include <string>
#include <vector>

namespace wtl::testing {

// Two-valued satisfaction over Gorn positions, written directly from the
// classical definitions. It shares no code with the library's evaluators.
// Constants hold iff they are not the zero of their weight kind; Or and the
// existential quantifiers are read classically.
class ClassicalChecker {
 public:
  explicit ClassicalChecker(const Tree& t);

  struct Valuation {
    std::map<std::string, Position> fo;
    std::map<std::string, std::set<Position>> so;
  };

  bool sat(const Formula& f, Valuation& val);

  // Boolean closure: exists a level at which the closure holds at v.
  bool closure(const Progress& psi, const FormulaFamily& family, const Position& v);

 private:
  bool progress(const Progress& psi, const Position& v, const Position& w);
  bool sat_rec(const FormulaNode& f, Valuation& val);
  std::string memo_key(const FormulaNode& f, const Valuation& val) const;

  Tree tree_;
  std::vector<Position> pos_;
  std::map<std::string, bool> memo_;
  std::map<Position, bool> closure_memo_;
  std::set<const FormulaNode*> keep_;
  std::vector<Formula> alive_;
};

}  // namespace wtl::testing
