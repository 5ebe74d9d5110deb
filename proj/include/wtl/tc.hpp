#pragma once

#include "wtl/evaluate.hpp"
#include "wtl/formula.hpp"
#include "wtl/semiring.hpp"
#include "wtl/tree.hpp"

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace wtl {

// Family (phi_0(x), phi_1(x,y1), ..., phi_m(x,y1..ym)).
struct FormulaFamily {
  std::vector<Formula> members;

  int m() const { return static_cast<int>(members.size()) - 1; }
};

// Names used by family members: "x" and "y1".."yk".
const std::string& family_x();
const std::string& family_y(int i);

// Every member's free variables lie within {x, y1..yk}; throws InvalidInput.
void validate_family(const FormulaFamily& family);

// File format: optional "semiring NAME" and "alphabet ..." header lines,
// then entries "phiK: <s-expression>" that may continue over several lines.
struct FamilyFile {
  std::optional<Semiring> semiring;
  std::optional<RankedAlphabet> alphabet;
  FormulaFamily family;
};
FamilyFile parse_family(std::string_view text, const Semiring& fallback);
std::string render_family(const FormulaFamily& family, const Semiring* s = nullptr,
                          const RankedAlphabet* sigma = nullptr);

// The progress relation psi(x, y).
class Progress {
 public:
  enum class Kind { DescPlus, Bounded, Custom };

  static Progress desc_plus();
  static Progress bounded(int n);
  // A Boolean formula over x and y; see validate_progress.
  static Progress custom(Formula f);
  // "desc+", "desc_plus" or "bounded:N".
  static Progress parse(std::string_view text);

  Kind kind() const { return kind_; }
  int bound() const { return n_; }
  std::string name() const;
  // psi as a formula over "x" and "y".
  Formula formula(int maxrk) const;

 private:
  Kind kind_ = Kind::DescPlus;
  int n_ = 0;
  Formula custom_;
};

// Checks that psi(v, w) implies that w is a proper descendant of v on every
// tree over sigma with at most max_size nodes. Throws InvalidInput.
void validate_progress(const Progress& psi, const RankedAlphabet& sigma, size_t max_size = 7);

struct TcOptions {
  EvalOptions eval;
  // Limit on m * |pos|^m, the tuple space per level.
  double tuple_cap = 5e6;
  // Compiled Boolean subformulas, reusable across trees.
  std::shared_ptr<BoolProgram> program;
};

// Level table T(v, l) for every node v (preorder index) and 1 <= l <= |pos|.
class TcTable {
 public:
  TcTable(Semiring s, size_t nodes);

  const Weight& level(size_t v, size_t l) const;  // zero for l outside [1, |pos|]
  Weight total(size_t v) const;
  size_t nodes() const { return nodes_; }
  Weight& at(size_t v, size_t l) { return t_[v * (nodes_ + 1) + l]; }

 private:
  Semiring s_;
  size_t nodes_;
  std::vector<Weight> t_;
};

TcTable tc_levels(const Semiring& s, const Progress& psi, const FormulaFamily& family,
                  const Tree& xi, const TcOptions& opts = {});
Weight eval_tc(const Semiring& s, const Progress& psi, const FormulaFamily& family, const Tree& xi,
               const Position& v = {}, const TcOptions& opts = {});

// The level-l formula psi-TC^l_x(Phi) with free variable x.
Formula build_tc_level(const Progress& psi, const FormulaFamily& family, int l,
                       const std::string& x, int maxrk, SemiringKind kind);

// phi'_k = psi_k(x, y1..yk) and phi_k with psi = desc_[1,n]; phi_0 unchanged.
FormulaFamily lift_bounded(const FormulaFamily& family, int n, int maxrk);

}  // namespace wtl
