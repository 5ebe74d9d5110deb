#pragma once

#include "wtl/semiring.hpp"
#include "wtl/tree.hpp"

#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace wtl {

// Bottom-up weighted tree automaton with states 0..n-1. Transitions are
// stored sparsely: for each symbol, child-state tuple -> weights per target.
class Wta {
 public:
  Wta(Semiring s, RankedAlphabet sigma, int states, std::set<int> final_states);

  const Semiring& semiring() const { return s_; }
  const RankedAlphabet& alphabet() const { return sigma_; }
  int state_count() const { return states_; }
  const std::set<int>& final_states() const { return final_; }

  // Overwrites the weight of (children, symbol, target).
  void set_transition(const std::string& symbol, const std::vector<int>& children, int target,
                      const Weight& w);
  Weight transition(const std::string& symbol, const std::vector<int>& children, int target) const;

  using Row = std::vector<Weight>;  // indexed by target state
  const std::map<std::vector<int>, Row>& transitions(const std::string& symbol) const;

  bool is_normalized() const { return final_.size() == 1 && *final_.begin() == 0; }

 private:
  Semiring s_;
  RankedAlphabet sigma_;
  int states_;
  std::set<int> final_;
  std::map<std::string, std::map<std::vector<int>, Row>> delta_;
};

// State vector of a slice; variable z_i evaluates to the unit vector of
// context[i-1]. Throws VariableOutOfRange for z_i with i > context size.
std::vector<Weight> run(const Wta& a, const Tree& zeta, const std::vector<int>& context = {});
Weight recognize(const Wta& a, const Tree& t);

// Equivalent automaton whose single final state is 0.
Wta normalize_final(const Wta& a);

// Text format:
//   semiring nat
//   alphabet sigma:2 alpha:0
//   states 2
//   final 0
//   trans sigma(0,1) -> 0 : 3
//   trans alpha -> 1 : 1
// '#' starts a comment.
Wta parse_wta(std::string_view text);
std::string render_wta(const Wta& a);

}  // namespace wtl
