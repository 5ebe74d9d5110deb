#pragma once

#include "wtl/tree.hpp"

#include <vector>

namespace wtl {

// A slice of C^n_k: a tree of height below 2n whose leaves z1..zk (in
// left-to-right order) all sit at depth n.
struct Slice {
  Tree body;
  int k = 0;

  bool operator==(const Slice&) const = default;
};

struct HeadCut {
  Slice head;
  std::vector<Position> cut;  // absolute positions, lexicographic order
};

// The head slice of xi at u and the cut positions below it: the relative
// depth-n descendants of u whose subtrees have height at least n.
HeadCut head_cut(const Tree& xi, const Position& u, int n);

struct Decomposition {
  Slice head;
  Position at;
  std::vector<Decomposition> children;

  size_t count() const;
};

Decomposition decompose(const Tree& xi, int n);
Tree recompose(const Decomposition& d);

// Whether body belongs to C^n_k (variables z1..zk at depth n, height < 2n).
bool in_slice_class(const Tree& body, int n, int k, const RankedAlphabet& sigma);

// Positions of z1..zk in the slice, in variable order.
std::vector<Position> variable_positions(const Tree& body);

// Largest k with C^n_k non-empty: maxrk^n.
int max_slice_arity(const RankedAlphabet& sigma, int n);

// All slices of C^n_k ordered by size and then rendering. Throws
// ExplosionGuard if there are more than cap.
std::vector<Slice> enumerate_slices(const RankedAlphabet& sigma, int n, int k, size_t cap = 100000);
// Size of C^n_k without materialising it (saturates at cap + 1).
size_t count_slices(const RankedAlphabet& sigma, int n, int k, size_t cap = 100000);

}  // namespace wtl
