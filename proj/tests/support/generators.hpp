#pragma once

#include "wtl/formula.hpp"
#include "wtl/semiring.hpp"
#include "wtl/tc.hpp"
#include "wtl/tree.hpp"
#include "wtl/wta.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace wtl::testing {

// Seeded source of small random choices.
class Rng {
 public:
  explicit Rng(uint64_t seed) : gen_(seed) {}
  // Uniform in [lo, hi].
  int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(gen_); }
  bool chance(double p) { return std::bernoulli_distribution(p)(gen_); }
  template <class T>
  const T& pick(const std::vector<T>& v) {
    return v[static_cast<size_t>(uniform(0, static_cast<int>(v.size()) - 1))];
  }
  std::mt19937_64& engine() { return gen_; }

 private:
  std::mt19937_64 gen_;
};

Semiring semiring_by_index(int i);  // 0..3: boolean, nat, tropical, viterbi
std::vector<Semiring> all_semirings();

// Small values: {0,1} / {0..3} / {inf,0..3} / {0,1/4,1/2,3/4,1}.
Weight random_weight(const Semiring& s, Rng& rng, bool allow_zero = true);

RankedAlphabet binary_alphabet();   // sigma:2 alpha:0
RankedAlphabet monadic_alphabet();  // gamma:1 alpha:0
RankedAlphabet mixed_alphabet();    // sigma:2 gamma:1 alpha:0 beta:0

Tree random_tree(const RankedAlphabet& sigma, size_t max_size, Rng& rng);

// Automaton with final state 0 whose transitions are non-zero with
// probability density.
Wta random_wta(const Semiring& s, const RankedAlphabet& sigma, int states, Rng& rng,
               double density = 0.6);

// Boolean formulas over the given free variables (first-order and sets).
Formula random_bmso(const RankedAlphabet& sigma, const std::vector<std::string>& fo,
                    const std::vector<std::string>& so, int depth, Rng& rng);
// Boolean atoms and their negations, conjunctions and disjunctions (BFO
// with modulo atoms, no quantifiers unless allow_quantifiers).
Formula random_bfo(const RankedAlphabet& sigma, const std::vector<std::string>& fo, int depth, Rng& rng,
                   bool allow_quantifiers = true);
// Step formula: Boolean combination of constants and Boolean formulas.
Formula random_step(const Semiring& s, const RankedAlphabet& sigma, const std::vector<std::string>& fo,
                    const std::vector<std::string>& so, int depth, Rng& rng);

// Step family phi_0..phi_m over x, y1..yk, with structural atoms linking
// x to the y_i often enough that the closure is rarely trivial.
FormulaFamily random_step_family(const Semiring& s, const RankedAlphabet& sigma, int m, Rng& rng);

}  // namespace wtl::testing
