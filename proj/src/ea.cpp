#include "wtl/ea.hpp"

#include "wtl/errors.hpp"
#include "wtl/macros.hpp"

namespace wtl {

namespace {

bool proper_prefix(const Position& a, const Position& b) {
  return a.length() < b.length() && a.is_prefix_of(b);
}

void check_members(const Tree& xi, const PositionSet& J) {
  for (const auto& p : J)
    if (!has_position(xi, p)) throw InvalidInput("position " + render_position(p) + " is not in the tree");
}

}  // namespace

Fork find_fork(const Tree& xi, const PositionSet& J, const Position& v) {
  check_members(xi, J);
  if (!J.count(v)) throw InvalidInput("fork top " + render_position(v) + " is not in J");
  Fork f{v, {}};
  // J is lexicographically sorted, so the strict descendants of v follow v
  // contiguously and each minimal one precedes everything below it.
  for (auto it = std::next(J.find(v)); it != J.end() && proper_prefix(v, *it); ++it)
    if (f.below.empty() || !f.below.back().is_prefix_of(*it)) f.below.push_back(*it);
  return f;
}

std::vector<Fork> forks_below(const Tree& xi, const PositionSet& J, const Position& w, int m) {
  std::vector<Fork> out;
  for (const auto& v : J) {
    if (!w.is_prefix_of(v)) continue;
    Fork f = find_fork(xi, J, v);
    if (f.k() <= m) out.push_back(std::move(f));
  }
  return out;
}

int branching_degree(const Tree& xi, const PositionSet& J) {
  int bd = 0;
  for (const auto& v : J) bd = std::max(bd, find_fork(xi, J, v).k());
  return bd;
}

StepLogic classify_family(const FormulaFamily& family) {
  bool fo = true, so = true;
  for (const auto& f : family.members) {
    fo = fo && f->in(Fragment::BFOmodStep);
    so = so && f->in(Fragment::BMSOStep);
  }
  if (fo) return StepLogic::BFOmod;
  if (so) return StepLogic::BMSO;
  throw NotStepFamily("family members are not all (BFO+mod)-step or BMSO-step formulas");
}

namespace {

// phi_k with x -> y and y_i -> zs[i-1].
Formula at_fork(const Formula& phi, const std::string& y, const macros::Names& zs) {
  std::map<std::string, std::string> ren{{family_x(), y}};
  for (size_t i = 0; i < zs.size(); ++i) ren[family_y(static_cast<int>(i) + 1)] = zs[i];
  return rename_free(phi, ren);
}

}  // namespace

EaFormula build_psi(const FormulaFamily& family, int maxrk, SemiringKind kind, bool strict) {
  validate_family(family);
  if (strict) classify_family(family);
  EaFormula out;
  std::vector<Formula> alts;
  for (int k = 0; k <= family.m(); ++k) {
    macros::Names zs;
    for (int i = 0; i < k; ++i) zs.push_back(fresh_name("z"));
    Formula body = mso::conj(macros::fork(out.X, out.y, zs, maxrk),
                             at_fork(family.members[static_cast<size_t>(k)], out.y, zs));
    for (auto it = zs.rbegin(); it != zs.rend(); ++it) body = mso::exists(*it, body);
    alts.push_back(body);
  }
  out.theta = mso::conj(
      mso::in(out.x, out.X),
      macros::implies_w(mso::in(out.y, out.X),
                        mso::conj(macros::desc(out.x, out.y, maxrk), mso::disj_all(alts, kind))));
  out.psi = mso::exists(out.X, mso::forall(out.y, out.theta));
  return out;
}

Formula theta_to_step(const Semiring& s, const FormulaFamily& family, int maxrk) {
  validate_family(family);
  const StepLogic logic = classify_family(family);
  const std::string x = "x", X = "X", y = "y";
  std::vector<Formula> alts;
  for (int k = 0; k <= family.m(); ++k) {
    macros::Names zs;
    for (int i = 0; i < k; ++i) zs.push_back(fresh_name("z"));
    const Formula fork = macros::fork(X, y, zs, maxrk);
    for (const auto& term : step_dnf(s, at_fork(family.members[static_cast<size_t>(k)], y, zs), logic)) {
      if (s.is_zero(term.coefficient)) continue;
      // The fork fixes the witnesses, so a Boolean block suffices.
      alts.push_back(mso::conj(mso::constant(term.coefficient),
                               macros::exists_b(zs, mso::conj(fork, term.guard))));
    }
  }
  const Formula in_y = mso::in(y, X);
  return mso::conj(mso::in(x, X),
                   mso::disj(mso::neg(in_y), mso::conj(mso::conj(in_y, macros::desc(x, y, maxrk)),
                                                       mso::disj_all(alts, s.kind()))));
}

EaReport check_ea(const Semiring& s, const FormulaFamily& family, const std::vector<Tree>& trees,
                  int maxrk, bool strict) {
  EaReport rep;
  const EaFormula ea = build_psi(family, maxrk, s.kind(), strict);
  std::optional<Formula> step_psi;
  bool is_step = true;
  try {
    classify_family(family);
  } catch (const NotStepFamily&) {
    is_step = false;
  }
  if (is_step) step_psi = mso::exists(ea.X, mso::forall(ea.y, theta_to_step(s, family, maxrk)));
  auto program = std::make_shared<BoolProgram>();
  TcOptions topts;
  topts.program = program;
  for (const auto& t : trees) {
    if (tree_size(t) > 16) throw ExplosionGuard("check_ea evaluates Psi on trees of at most 16 nodes");
    IndexedTree it(t);
    const Weight want = eval_tc(s, Progress::desc_plus(), family, t, {}, topts);
    EvalOptions eo;
    eo.so_cap = 16;
    Evaluator ev(s, it, eo, program);
    Env env;
    env.push(ea.x, 0);
    Weight got = ev.eval(ea.psi, env);
    ++rep.checked;
    if (!(got == want)) {
      rep = {false, rep.checked, t, want, got, "Psi"};
      break;
    }
    if (step_psi) {
      got = ev.eval(*step_psi, env);
      if (!(got == want)) {
        rep = {false, rep.checked, t, want, got, "step form of Psi"};
        break;
      }
    }
  }
  return rep;
}

}  // namespace wtl
