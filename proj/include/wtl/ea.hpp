#pragma once

#include "wtl/evaluate.hpp"
#include "wtl/tc.hpp"

#include <optional>
#include <set>
#include <string>
#include <vector>

namespace wtl {

using PositionSet = std::set<Position>;

// <top, below_1..below_k>: the minimal strict J-descendants of top, in
// sibling order.
struct Fork {
  Position top;
  std::vector<Position> below;

  int k() const { return static_cast<int>(below.size()); }
  bool operator==(const Fork&) const = default;
  auto operator<=>(const Fork&) const = default;
};

// Requires v in J and J within pos(xi); throws InvalidInput otherwise.
Fork find_fork(const Tree& xi, const PositionSet& J, const Position& v);
// Forks of J whose top is w or below w and whose degree is at most m.
std::vector<Fork> forks_below(const Tree& xi, const PositionSet& J, const Position& w, int m);
// Largest fork degree over J; 0 for the empty set.
int branching_degree(const Tree& xi, const PositionSet& J);

// Which step logic a family lives in. Throws NotStepFamily if neither.
StepLogic classify_family(const FormulaFamily& family);

// theta(x, X, y) and Psi(x) = exists X. forall y. theta.
struct EaFormula {
  Formula theta;
  Formula psi;
  std::string x = "x", X = "X", y = "y";
};

// With strict set, every member must be a step formula (NotStepFamily).
EaFormula build_psi(const FormulaFamily& family, int maxrk, SemiringKind kind, bool strict = true);

// A step formula equal to theta: each phi_k is rewritten as a sum of
// a_i and guard_i, and the weights are pulled out of the witness block.
Formula theta_to_step(const Semiring& s, const FormulaFamily& family, int maxrk);

struct EaReport {
  bool pass = true;
  size_t checked = 0;
  std::optional<Tree> counterexample;
  std::optional<Weight> expected, actual;
  std::string what;  // which side disagreed
};

// desc+ closure at the root against Psi at the root, per tree. When the
// family is a step family, the step form of theta is compared as well.
// Trees above 16 nodes raise ExplosionGuard.
EaReport check_ea(const Semiring& s, const FormulaFamily& family, const std::vector<Tree>& trees,
                  int maxrk, bool strict = true);

}  // namespace wtl
