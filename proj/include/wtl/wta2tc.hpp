#pragma once

#include "wtl/slicing.hpp"
#include "wtl/tc.hpp"
#include "wtl/wta.hpp"

#include <optional>
#include <string>
#include <vector>

namespace wtl {

// Run vectors of one slice under every assignment of states to its variables.
struct SliceRow {
  Slice slice;
  // weights[c][q] where c encodes (q_1..q_k) in base n, q_1 most significant.
  std::vector<std::vector<Weight>> weights;
};

struct PhiConstruction {
  Wta automaton;  // final state normalized, F = {0}
  int n = 0;      // slice depth, equal to the number of states
  std::vector<std::vector<SliceRow>> table;  // table[k] lists C^n_k
  FormulaFamily family;
};

// The family Phi_A whose desc_[1,2n] closure recognizes r_A. Requires F = {0}
// (NotNormalized otherwise). slice_cap bounds every C^n_k.
PhiConstruction build_phi(const Wta& a, size_t slice_cap = 10000);

// Closed-form value of phi_k(v, v_1..v_k) for a normalized automaton.
Weight phi_semantics_direct(const Wta& a, const Tree& xi, int k, const Position& v,
                            const std::vector<Position>& vs);

// base position <v>_n and encoded state [v]_n
Position base_position(const Position& v, int n);
int encoded_state(const Position& v, int n);

struct BbtcReport {
  bool pass = true;
  size_t checked = 0;
  bool renumbered = false;  // normalization changed state identities
  int n = 0;
  std::optional<Tree> counterexample;
  std::optional<Weight> expected, actual;
};

// recognize(A, xi) against the bounded closure of Phi_A at the root, for each
// tree. Normalizes A first. Refuses n >= 3 with maxrk >= 2 (ExplosionGuard).
BbtcReport check_bbtc(const Wta& a, const std::vector<Tree>& trees, const TcOptions& opts = {},
                      size_t slice_cap = 10000);

}  // namespace wtl
