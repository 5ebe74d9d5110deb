#include "wtl/evaluate.hpp"

#include "wtl/errors.hpp"

#include <algorithm>
#include <functional>
#include <unordered_map>

namespace wtl {

bool EncodedTree::valid() const {
  const size_t n = tree_size(base);
  if (marks.size() != n) return false;
  for (const auto& m : marks)
    for (const auto& v : m)
      if (std::find(varset.begin(), varset.end(), v) == varset.end()) return false;
  for (const auto& v : varset) {
    if (is_so_variable(v)) continue;
    size_t count = 0;
    for (const auto& m : marks) count += m.count(v);
    if (count != 1) return false;
  }
  return true;
}

EncodedTree encode(const Tree& t, const Assignment& a, const std::vector<std::string>& varset) {
  EncodedTree e{t, varset, {}};
  const auto pos = positions(t);
  e.marks.resize(pos.size());
  auto index = [&](const Position& u) -> size_t {
    auto it = std::lower_bound(pos.begin(), pos.end(), u);
    if (it == pos.end() || *it != u)
      throw PositionOutOfRange("position " + render_position(u) + " is not in the tree");
    return static_cast<size_t>(it - pos.begin());
  };
  for (const auto& v : varset) {
    if (is_so_variable(v)) {
      auto it = a.so.find(v);
      if (it == a.so.end()) continue;
      for (const auto& u : it->second) e.marks[index(u)].insert(v);
    } else {
      auto it = a.fo.find(v);
      if (it == a.fo.end()) continue;
      e.marks[index(it->second)].insert(v);
    }
  }
  return e;
}

std::pair<Tree, Assignment> decode(const EncodedTree& e) {
  if (!e.valid()) throw InvalidEncoding("encoded tree is not a valid encoding");
  Assignment a;
  const auto pos = positions(e.base);
  for (const auto& v : e.varset)
    if (is_so_variable(v)) a.so[v];
  for (size_t i = 0; i < pos.size(); ++i)
    for (const auto& v : e.marks[i]) {
      if (is_so_variable(v))
        a.so[v].insert(pos[i]);
      else
        a.fo[v] = pos[i];
    }
  return {e.base, a};
}

// ---------------------------------------------------------------------------

Evaluator::Evaluator(Semiring s, const IndexedTree& tree, EvalOptions opts,
                     std::shared_ptr<BoolProgram> program)
    : s_(std::move(s)),
      tree_(tree),
      opts_(opts),
      engine_(program ? std::move(program) : std::make_shared<BoolProgram>(), tree, opts.so_cap) {}

Weight Evaluator::eval(const Formula& f, Env& env) {
  if (opts_.boolean_fast_path && f->in(Fragment::BMSO) && f->kind() != FormulaKind::Const)
    return engine_.holds(f, env) ? s_.one() : s_.zero();
  return eval_rec(*f, env);
}

bool Evaluator::holds(const Formula& f, Env& env) {
  if (!f->in(Fragment::BMSO)) throw InvalidInput("holds() needs a BMSO formula");
  if (opts_.boolean_fast_path) return engine_.holds(f, env);
  return !s_.is_zero(eval_rec(*f, env));
}

uint32_t Evaluator::lookup(const std::string& name, const Env& env) const {
  auto v = env.find(name);
  if (!v) throw UnboundVariable("variable '" + name + "' is not bound");
  return *v;
}

bool Evaluator::atom_holds(const FormulaNode& f, Env& env) const {
  switch (f.kind()) {
    case FormulaKind::Label: return tree_.label(lookup(f.var(), env)) == f.symbol();
    case FormulaKind::Edge: {
      uint32_t x = lookup(f.var(), env), y = lookup(f.var2(), env);
      return tree_.parent(y) == static_cast<int>(x) && tree_.child_index(y) == f.index();
    }
    case FormulaKind::Leq: return lookup(f.var(), env) <= lookup(f.var2(), env);
    case FormulaKind::In: {
      uint32_t x = lookup(f.var(), env), X = lookup(f.var2(), env);
      return x < 32 && ((X >> x) & 1u);
    }
    case FormulaKind::Mod: return tree_.depth(lookup(f.var(), env)) % f.index() == f.residue();
    default: return false;
  }
}

Weight Evaluator::eval_rec(const FormulaNode& f, Env& env) {
  switch (f.kind()) {
    case FormulaKind::Const: {
      const Weight& w = f.weight();
      if (w.is_zero()) return s_.zero();
      if (w.is_one()) return s_.one();
      if (w.kind() != s_.kind())
        throw InvalidInput("constant " + Semiring(w.kind()).render(w) + " does not belong to " +
                           std::string(s_.name()));
      return w;
    }
    case FormulaKind::Label:
    case FormulaKind::Edge:
    case FormulaKind::Leq:
    case FormulaKind::In:
    case FormulaKind::Mod: return atom_holds(f, env) ? s_.one() : s_.zero();
    case FormulaKind::Not: return s_.is_zero(eval(f.sub(), env)) ? s_.one() : s_.zero();
    case FormulaKind::Or: return s_.add(eval(f.left(), env), eval(f.right(), env));
    case FormulaKind::And: {
      Weight a = eval(f.left(), env);
      if (s_.is_zero(a)) return a;
      return s_.mul(a, eval(f.right(), env));
    }
    case FormulaKind::ExistsFO:
    case FormulaKind::ForallFO: {
      const bool ex = f.kind() == FormulaKind::ExistsFO;
      Weight acc = ex ? s_.zero() : s_.one();
      env.push(f.var(), 0);
      for (uint32_t v = 0; v < tree_.size(); ++v) {
        env.set_top(v);
        Weight w = eval(f.sub(), env);
        acc = ex ? s_.add(acc, w) : s_.mul(acc, w);
        if (!ex && s_.is_zero(acc)) break;
      }
      env.pop();
      return acc;
    }
    case FormulaKind::ExistsSO:
    case FormulaKind::ForallSO: {
      const bool ex = f.kind() == FormulaKind::ExistsSO;
      const size_t n = tree_.size();
      if (n > opts_.so_cap || n > 31)
        throw ExplosionGuard("second-order quantifier over " + std::to_string(n) +
                             " positions exceeds the cap of " + std::to_string(opts_.so_cap));
      Weight acc = ex ? s_.zero() : s_.one();
      env.push(f.var(), 0);
      for (uint32_t m = 0; m < (1u << n); ++m) {
        env.set_top(m);
        Weight w = eval(f.sub(), env);
        acc = ex ? s_.add(acc, w) : s_.mul(acc, w);
        if (!ex && s_.is_zero(acc)) break;
      }
      env.pop();
      return acc;
    }
  }
  return s_.zero();
}

namespace {

void check_free_vars(const Formula& f, const std::vector<std::string>& varset) {
  for (const auto& v : f->free_vars())
    if (std::find(varset.begin(), varset.end(), v) == varset.end())
      throw UnboundVariable("free variable '" + v + "' is not in the variable set");
}

}  // namespace

Weight evaluate(const Semiring& s, const Formula& f, const EncodedTree& e, EvalOptions opts) {
  check_free_vars(f, e.varset);
  if (!e.valid()) return s.zero();
  IndexedTree it(e.base);
  bool has_so = std::any_of(e.varset.begin(), e.varset.end(),
                            [](const std::string& v) { return is_so_variable(v); });
  if (has_so && it.size() > 31)
    throw ExplosionGuard("set variables need trees with at most 31 positions");
  std::vector<uint32_t> vals(e.varset.size(), 0);
  for (size_t p = 0; p < e.marks.size(); ++p)
    for (const auto& v : e.marks[p]) {
      size_t i = static_cast<size_t>(std::find(e.varset.begin(), e.varset.end(), v) -
                                     e.varset.begin());
      if (is_so_variable(v))
        vals[i] |= 1u << p;
      else
        vals[i] = static_cast<uint32_t>(p);
    }
  Env env;
  for (size_t i = 0; i < e.varset.size(); ++i) env.push(e.varset[i], vals[i]);
  Evaluator ev(s, it, opts);
  return ev.eval(f, env);
}

Weight evaluate(const Semiring& s, const Formula& f, const Tree& t, const Assignment& a,
                EvalOptions opts) {
  std::vector<std::string> varset;
  for (const auto& [v, _] : a.fo) varset.push_back(v);
  for (const auto& [v, _] : a.so) varset.push_back(v);
  return evaluate(s, f, encode(t, a, varset), opts);
}

FragmentSet fragment_of(const Formula& f) { return f->fragments(); }

// ---------------------------------------------------------------------------

namespace {

Fragment base_of(StepLogic l) { return l == StepLogic::BMSO ? Fragment::BMSO : Fragment::BFOmod; }
Fragment step_of(StepLogic l) {
  return l == StepLogic::BMSO ? Fragment::BMSOStep : Fragment::BFOmodStep;
}

struct AtomTable {
  std::vector<Formula> atoms;
  std::unordered_multimap<size_t, size_t> by_hash;
  std::unordered_map<const FormulaNode*, size_t> by_ptr;

  size_t add(const Formula& f) {
    if (auto it = by_ptr.find(f.get()); it != by_ptr.end()) return it->second;
    auto range = by_hash.equal_range(f->hash());
    for (auto it = range.first; it != range.second; ++it)
      if (structurally_equal(atoms[it->second], f)) {
        by_ptr.emplace(f.get(), it->second);
        return it->second;
      }
    size_t id = atoms.size();
    atoms.push_back(f);
    by_hash.emplace(f->hash(), id);
    by_ptr.emplace(f.get(), id);
    return id;
  }
};

void collect_atoms(const Formula& f, StepLogic logic, AtomTable& table) {
  if (f->kind() == FormulaKind::Const) return;
  if (f->in(base_of(logic))) {
    table.add(f);
    return;
  }
  switch (f->kind()) {
    case FormulaKind::Not: collect_atoms(f->sub(), logic, table); return;
    case FormulaKind::Or:
    case FormulaKind::And:
      collect_atoms(f->left(), logic, table);
      collect_atoms(f->right(), logic, table);
      return;
    default: throw NotStepFormula("formula is not a step formula: " + to_sexpr(f));
  }
}

Weight fold(const Semiring& s, const Formula& f, StepLogic logic, AtomTable& table, uint64_t tau) {
  switch (f->kind()) {
    case FormulaKind::Const: {
      const Weight& w = f->weight();
      if (w.is_zero()) return s.zero();
      if (w.is_one()) return s.one();
      return w;
    }
    case FormulaKind::Not:
      if (!f->in(base_of(logic)))
        return s.is_zero(fold(s, f->sub(), logic, table, tau)) ? s.one() : s.zero();
      break;
    case FormulaKind::Or:
      if (!f->in(base_of(logic)))
        return s.add(fold(s, f->left(), logic, table, tau), fold(s, f->right(), logic, table, tau));
      break;
    case FormulaKind::And:
      if (!f->in(base_of(logic)))
        return s.mul(fold(s, f->left(), logic, table, tau), fold(s, f->right(), logic, table, tau));
      break;
    default: break;
  }
  size_t i = table.add(f);
  return ((tau >> i) & 1u) ? s.zero() : s.one();
}

}  // namespace

std::vector<Formula> step_atoms(const Formula& f, StepLogic logic) {
  if (!f->in(step_of(logic)))
    throw NotStepFormula("formula is not a " + std::string(fragment_name(step_of(logic))) +
                         " formula");
  AtomTable table;
  collect_atoms(f, logic, table);
  return table.atoms;
}

std::vector<DnfTerm> step_dnf(const Semiring& s, const Formula& f, StepLogic logic,
                              size_t max_atoms) {
  if (!f->in(step_of(logic)))
    throw NotStepFormula("formula is not a " + std::string(fragment_name(step_of(logic))) +
                         " formula");
  AtomTable table;
  collect_atoms(f, logic, table);
  const size_t p = table.atoms.size();
  if (p > max_atoms || p > 30)
    throw ExplosionGuard("step formula has " + std::to_string(p) + " atoms, more than " +
                         std::to_string(max_atoms));
  std::vector<DnfTerm> out;
  out.reserve(size_t{1} << p);
  for (uint64_t tau = 0; tau < (uint64_t{1} << p); ++tau) {
    std::vector<Formula> lits;
    for (size_t i = 0; i < p; ++i)
      lits.push_back(((tau >> i) & 1u) ? mso::neg(table.atoms[i]) : table.atoms[i]);
    out.push_back({fold(s, f, logic, table, tau), mso::conj_all(lits)});
  }
  return out;
}

Formula dnf_formula(const std::vector<DnfTerm>& terms, SemiringKind kind) {
  std::vector<Formula> parts;
  for (const auto& t : terms) parts.push_back(mso::conj(mso::constant(t.coefficient), t.guard));
  return mso::disj_all(parts, kind);
}

}  // namespace wtl
