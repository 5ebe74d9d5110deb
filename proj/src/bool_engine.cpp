#include "wtl/bool_engine.hpp"

#include "wtl/errors.hpp"

#include <algorithm>
#include <cstring>
#include <deque>
#include <map>

namespace wtl {

using detail::Shape;
using SK = Shape::Kind;

namespace {

constexpr int kMaxSlots = 64;
constexpr int kMaxMergedBound = 24;

bool is_atom(SK k) { return k >= SK::Label && k <= SK::Mod; }
bool is_quant(SK k) { return k == SK::Exists || k == SK::Forall; }

int cost(SK k) {
  if (k == SK::True || k == SK::False || is_atom(k)) return 0;
  if (k == SK::And || k == SK::Or) return 1;
  return 2;
}

uint64_t hash_vals(int shape, const uint32_t* vals, int n) {
  uint64_t h = 1469598103934665603ULL ^ static_cast<uint64_t>(shape) * 0x9E3779B97F4A7C15ULL;
  for (int i = 0; i < n; ++i) {
    h ^= vals[i] + 0x9E3779B97F4A7C15ULL + (h << 6) + (h >> 2);
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace

// ---------------------------------------------------------------------------
// Compilation

const BoolProgram::Ref& BoolProgram::compile(const Formula& f) {
  if (!f->in(Fragment::BMSO))
    throw InvalidInput("the Boolean engine only accepts BMSO formulas");
  return compile_pol(f, true);
}

int BoolProgram::symbol_id(const std::string& s) {
  auto [it, inserted] = symbol_index_.emplace(s, static_cast<int>(symbols_.size()));
  if (inserted) symbols_.push_back(s);
  return it->second;
}

BoolProgram::Ref BoolProgram::constant(bool value) {
  Shape s;
  s.kind = value ? SK::True : SK::False;
  return Ref{intern(std::move(s)), {}};
}

const BoolProgram::Ref& BoolProgram::compile_pol(const Formula& f, bool pol) {
  auto& cache = cache_[pol ? 1 : 0];
  if (auto it = cache.find(f.get()); it != cache.end()) return it->second.second;
  Ref r;
  switch (f->kind()) {
    case FormulaKind::Const: r = constant(f->weight().is_one() == pol); break;
    case FormulaKind::Label:
      r = atom(SK::Label, !pol, symbol_id(f->symbol()), 0, {f->var()}, {0});
      break;
    case FormulaKind::Edge:
      r = atom(SK::Edge, !pol, f->index(), 0, {f->var(), f->var2()}, {0, 0});
      break;
    case FormulaKind::Leq: r = atom(SK::Leq, !pol, 0, 0, {f->var(), f->var2()}, {0, 0}); break;
    case FormulaKind::In: r = atom(SK::In, !pol, 0, 0, {f->var(), f->var2()}, {0, 1}); break;
    case FormulaKind::Mod: r = atom(SK::Mod, !pol, f->index(), f->residue(), {f->var()}, {0}); break;
    case FormulaKind::Not: r = compile_pol(f->sub(), !pol); break;
    case FormulaKind::And: {
      const Ref& a = compile_pol(f->left(), pol);
      const Ref& b = compile_pol(f->right(), pol);
      r = junction(pol ? SK::And : SK::Or, {Item{a.shape, a.names}, Item{b.shape, b.names}});
      break;
    }
    case FormulaKind::ForallFO:
    case FormulaKind::ForallSO: {
      const Ref& body = compile_pol(f->sub(), pol);
      r = quantifier(pol ? SK::Forall : SK::Exists, f->var(),
                     f->kind() == FormulaKind::ForallSO, body);
      break;
    }
    default: throw InvalidInput("the Boolean engine only accepts BMSO formulas");
  }
  auto [it, _] = cache.emplace(f.get(), std::make_pair(f, std::move(r)));
  return it->second.second;
}

BoolProgram::Ref BoolProgram::atom(SK k, bool negated, int p0, int p1,
                                   const std::vector<std::string>& vars,
                                   const std::vector<uint8_t>& so) {
  Shape s;
  s.kind = k;
  s.negated = negated;
  s.p0 = p0;
  s.p1 = p1;
  std::vector<std::string> names;
  for (size_t i = 0; i < vars.size(); ++i) {
    auto it = std::find(names.begin(), names.end(), vars[i]);
    if (it == names.end()) {
      s.args.push_back(static_cast<int>(names.size()));
      names.push_back(vars[i]);
      s.slot_is_so.push_back(so[i]);
    } else {
      s.args.push_back(static_cast<int>(it - names.begin()));
    }
  }
  s.nfree = s.nslots = static_cast<int>(names.size());
  return Ref{intern(std::move(s)), std::move(names)};
}

BoolProgram::Ref BoolProgram::junction(SK k, std::vector<Item> input) {
  std::vector<Item> items;
  std::deque<Item> work(input.begin(), input.end());
  while (!work.empty()) {
    Item it = std::move(work.front());
    work.pop_front();
    const Shape& s = shapes_[static_cast<size_t>(it.shape)];
    if (s.kind == k) {
      for (auto sub = s.items.rbegin(); sub != s.items.rend(); ++sub) {
        Item c{sub->shape, {}};
        for (int m : sub->map) c.names.push_back(it.names[static_cast<size_t>(m)]);
        work.push_front(std::move(c));
      }
      continue;
    }
    if (s.kind == SK::True || s.kind == SK::False) {
      bool v = s.kind == SK::True;
      if ((k == SK::And) != v) return constant(v);  // absorbing
      continue;                                     // neutral
    }
    bool dup = false;
    for (const auto& e : items)
      if (e.shape == it.shape && e.names == it.names) dup = true;
    if (!dup) items.push_back(std::move(it));
  }
  if (items.empty()) return constant(k == SK::And);
  if (items.size() == 1) return Ref{items[0].shape, items[0].names};
  std::vector<std::string> free_names;
  for (const auto& it : items)
    for (const auto& n : it.names)
      if (std::find(free_names.begin(), free_names.end(), n) == free_names.end())
        free_names.push_back(n);
  if (free_names.size() > static_cast<size_t>(kMaxSlots))
    throw ExplosionGuard("Boolean engine: too many variables in one junction");
  Shape s;
  s.kind = k;
  return finish(std::move(s), std::move(items), free_names, {});
}

BoolProgram::Ref BoolProgram::quantifier(SK q, const std::string& var, bool so, const Ref& body) {
  const SK j = q == SK::Exists ? SK::And : SK::Or;
  std::vector<std::string> bound{var};
  std::map<std::string, uint8_t> so_flag{{var, so ? 1 : 0}};
  std::vector<Item> items;
  std::deque<Item> work{Item{body.shape, body.names}};
  while (!work.empty()) {
    Item it = std::move(work.front());
    work.pop_front();
    const Shape& s = shapes_[static_cast<size_t>(it.shape)];
    if (s.kind == j) {
      for (auto sub = s.items.rbegin(); sub != s.items.rend(); ++sub) {
        Item c{sub->shape, {}};
        for (int m : sub->map) c.names.push_back(it.names[static_cast<size_t>(m)]);
        work.push_front(std::move(c));
      }
      continue;
    }
    if (s.kind == q && static_cast<int>(bound.size()) + (s.nslots - s.nfree) <= kMaxMergedBound) {
      std::vector<std::string> all = it.names;
      for (int b = s.nfree; b < s.nslots; ++b) {
        std::string fresh = "#" + std::to_string(++internal_counter_);
        all.push_back(fresh);
        bound.push_back(fresh);
        so_flag[fresh] = s.slot_is_so[static_cast<size_t>(b)];
      }
      for (auto sub = s.items.rbegin(); sub != s.items.rend(); ++sub) {
        Item c{sub->shape, {}};
        for (int m : sub->map) c.names.push_back(all[static_cast<size_t>(m)]);
        work.push_front(std::move(c));
      }
      continue;
    }
    if (s.kind == SK::True || s.kind == SK::False) {
      bool v = s.kind == SK::True;
      if ((j == SK::And) != v) return constant(v);
      continue;
    }
    bool dup = false;
    for (const auto& e : items)
      if (e.shape == it.shape && e.names == it.names) dup = true;
    if (!dup) items.push_back(std::move(it));
  }
  if (items.empty()) return constant(q == SK::Exists);

  std::vector<std::string> free_names, bound_names;
  for (const auto& it : items)
    for (const auto& n : it.names) {
      bool is_bound = std::find(bound.begin(), bound.end(), n) != bound.end();
      auto& dst = is_bound ? bound_names : free_names;
      if (std::find(dst.begin(), dst.end(), n) == dst.end()) dst.push_back(n);
    }
  if (bound_names.empty()) return junction(j, std::move(items));
  if (free_names.size() + bound_names.size() > static_cast<size_t>(kMaxSlots))
    throw ExplosionGuard("Boolean engine: too many variables in one quantifier block");
  Shape s;
  s.kind = q;
  // so flags for bound slots are recorded before finish() derives the rest
  s.slot_is_so.resize(free_names.size() + bound_names.size(), 0);
  for (size_t i = 0; i < bound_names.size(); ++i)
    s.slot_is_so[free_names.size() + i] = so_flag[bound_names[i]];
  return finish(std::move(s), std::move(items), free_names, bound_names);
}

BoolProgram::Ref BoolProgram::finish(Shape s, std::vector<Item> items,
                                     const std::vector<std::string>& free_names,
                                     const std::vector<std::string>& bound_names) {
  std::vector<std::string> all = free_names;
  all.insert(all.end(), bound_names.begin(), bound_names.end());
  s.nfree = static_cast<int>(free_names.size());
  s.nslots = static_cast<int>(all.size());
  s.slot_is_so.resize(all.size(), 0);
  // Cheap items first; stable so that renamings give equal shapes.
  std::stable_sort(items.begin(), items.end(), [&](const Item& a, const Item& b) {
    return cost(shapes_[static_cast<size_t>(a.shape)].kind) <
           cost(shapes_[static_cast<size_t>(b.shape)].kind);
  });
  for (const auto& it : items) {
    const Shape& c = shapes_[static_cast<size_t>(it.shape)];
    Shape::Item si{it.shape, {}};
    for (size_t jx = 0; jx < it.names.size(); ++jx) {
      int slot = static_cast<int>(std::find(all.begin(), all.end(), it.names[jx]) - all.begin());
      si.map.push_back(slot);
      if (slot < s.nfree) s.slot_is_so[static_cast<size_t>(slot)] = c.slot_is_so[jx];
    }
    s.items.push_back(std::move(si));
  }
  if (is_quant(s.kind)) plan(s);
  return Ref{intern(std::move(s)), free_names};
}

void BoolProgram::plan(Shape& s) {
  const int nb = s.nslots - s.nfree;
  std::vector<uint64_t> need(s.items.size(), 0);  // bound slots used, as bits
  for (size_t i = 0; i < s.items.size(); ++i)
    for (int m : s.items[i].map)
      if (m >= s.nfree) need[i] |= 1ULL << (m - s.nfree);
  std::vector<bool> placed(s.items.size(), false);
  for (size_t i = 0; i < s.items.size(); ++i)
    if (need[i] == 0) {
      s.pre.push_back(static_cast<int>(i));
      placed[i] = true;
    }
  uint64_t have = 0;
  for (int step = 0; step < nb; ++step) {
    int best = -1;
    long best_score = -1;
    for (int b = 0; b < nb; ++b) {
      if (have & (1ULL << b)) continue;
      uint64_t with = have | (1ULL << b);
      long completes = 0, touches = 0, cheap = 0;
      for (size_t i = 0; i < s.items.size(); ++i) {
        if (placed[i]) continue;
        if ((need[i] & with) == need[i]) {
          ++completes;
          if (cost(shapes_[static_cast<size_t>(s.items[i].shape)].kind) == 0) ++cheap;
        }
        if (need[i] & (1ULL << b)) ++touches;
      }
      long score = completes * 1000000 + cheap * 1000 + touches;
      if (score > best_score) {
        best_score = score;
        best = b;
      }
    }
    have |= 1ULL << best;
    s.order.push_back(s.nfree + best);
    std::vector<int> now;
    for (size_t i = 0; i < s.items.size(); ++i)
      if (!placed[i] && (need[i] & have) == need[i]) {
        now.push_back(static_cast<int>(i));
        placed[i] = true;
      }
    s.after.push_back(std::move(now));
  }
}

int BoolProgram::intern(Shape s) {
  std::string key;
  auto put = [&](long v) {
    key += std::to_string(v);
    key += ',';
  };
  put(static_cast<long>(s.kind));
  put(s.negated);
  put(s.p0);
  put(s.p1);
  put(s.nfree);
  put(s.nslots);
  key += 'a';
  for (int a : s.args) put(a);
  key += 's';
  for (auto b : s.slot_is_so) put(b);
  key += 'i';
  for (const auto& it : s.items) {
    put(it.shape);
    key += ':';
    for (int m : it.map) put(m);
    key += ';';
  }
  auto [pos, inserted] = index_.emplace(std::move(key), static_cast<int>(shapes_.size()));
  if (inserted) shapes_.push_back(std::move(s));
  return pos->second;
}

// ---------------------------------------------------------------------------
// Evaluation

BoolContext::BoolContext(std::shared_ptr<BoolProgram> program, const IndexedTree& tree,
                         size_t so_cap)
    : program_(std::move(program)), tree_(tree), so_cap_(so_cap) {
  std::map<std::string, int> ids;
  for (size_t v = 0; v < tree.size(); ++v) {
    auto [it, inserted] = ids.emplace(tree.label(v), static_cast<int>(tree_labels_.size()));
    if (inserted) tree_labels_.push_back(tree.label(v));
    label_id_.push_back(it->second);
  }
}

bool BoolContext::holds(const Formula& f, const Env& env) {
  const auto& ref = program_->compile(f);
  uint32_t vals[kMaxSlots];
  const uint32_t n = static_cast<uint32_t>(tree_.size());
  for (size_t i = 0; i < ref.names.size(); ++i) {
    auto v = env.find(ref.names[i]);
    if (!v) throw UnboundVariable("variable '" + ref.names[i] + "' is not bound");
    if (is_so_variable(ref.names[i])) {
      if (n < 32 && (*v >> n) != 0)
        throw InvalidInput("set value for '" + ref.names[i] + "' exceeds the tree");
    } else if (*v >= n) {
      throw InvalidInput("position value for '" + ref.names[i] + "' exceeds the tree");
    }
    vals[i] = *v;
  }
  return eval(ref.shape, vals);
}

bool BoolContext::eval_atom(const Shape& s, const uint32_t* vals) {
  bool r = false;
  switch (s.kind) {
    case SK::Label: {
      const size_t sym = static_cast<size_t>(s.p0);
      if (sym >= symbol_map_.size()) {
        const auto& syms = program_->symbols();
        for (size_t i = symbol_map_.size(); i < syms.size(); ++i) {
          auto it = std::find(tree_labels_.begin(), tree_labels_.end(), syms[i]);
          symbol_map_.push_back(it == tree_labels_.end() ? -1
                                                         : static_cast<int>(it - tree_labels_.begin()));
        }
      }
      r = label_id_[vals[s.args[0]]] == symbol_map_[sym];
      break;
    }
    case SK::Edge: {
      uint32_t x = vals[s.args[0]], y = vals[s.args[1]];
      r = tree_.parent(y) == static_cast<int>(x) && tree_.child_index(y) == s.p0;
      break;
    }
    case SK::Leq: r = vals[s.args[0]] <= vals[s.args[1]]; break;
    case SK::In: {
      uint32_t x = vals[s.args[0]];
      r = x < 32 && ((vals[s.args[1]] >> x) & 1u);
      break;
    }
    case SK::Mod: r = tree_.depth(vals[s.args[0]]) % s.p0 == s.p1; break;
    default: break;
  }
  return r != s.negated;
}

bool BoolContext::item_value(const Shape& s, int item, const uint32_t* vals) {
  const auto& it = s.items[static_cast<size_t>(item)];
  uint32_t buf[kMaxSlots];
  for (size_t j = 0; j < it.map.size(); ++j) buf[j] = vals[it.map[j]];
  return eval(it.shape, buf);
}

uint32_t BoolContext::domain(const Shape& s, int slot) const {
  const uint32_t n = static_cast<uint32_t>(tree_.size());
  if (!s.slot_is_so[static_cast<size_t>(slot)]) return n;
  if (n > so_cap_ || n > 31)
    throw ExplosionGuard("second-order quantifier over " + std::to_string(n) +
                         " positions exceeds the cap of " + std::to_string(so_cap_));
  return 1u << n;
}

bool BoolContext::search(const Shape& s, uint32_t* vals, size_t step, bool exists) {
  if (step == s.order.size()) return true;
  const int slot = s.order[step];
  const uint32_t dom = domain(s, slot);
  const auto& checks = s.after[step];
  for (uint32_t v = 0; v < dom; ++v) {
    vals[slot] = v;
    bool ok = true;
    for (int i : checks)
      if (item_value(s, i, vals) != exists) {
        ok = false;
        break;
      }
    if (ok && search(s, vals, step + 1, exists)) return true;
  }
  return false;
}

bool BoolContext::eval(int sid, const uint32_t* vals) {
  const Shape& s = program_->shape(sid);
  switch (s.kind) {
    case SK::True: return true;
    case SK::False: return false;
    case SK::Label:
    case SK::Edge:
    case SK::Leq:
    case SK::In:
    case SK::Mod: return eval_atom(s, vals);
    default: break;
  }
  const uint64_t h = hash_vals(sid, vals, s.nfree);
  if (const uint8_t* hit = memo_.find(sid, vals, s.nfree, h)) return *hit != 0;
  bool result = false;
  switch (s.kind) {
    case SK::And:
      result = true;
      for (size_t i = 0; i < s.items.size(); ++i)
        if (!item_value(s, static_cast<int>(i), vals)) {
          result = false;
          break;
        }
      break;
    case SK::Or:
      for (size_t i = 0; i < s.items.size(); ++i)
        if (item_value(s, static_cast<int>(i), vals)) {
          result = true;
          break;
        }
      break;
    case SK::Exists:
    case SK::Forall: {
      const bool ex = s.kind == SK::Exists;
      uint32_t local[kMaxSlots];
      std::memcpy(local, vals, sizeof(uint32_t) * static_cast<size_t>(s.nfree));
      bool decided = false;
      for (int i : s.pre)
        if (item_value(s, i, local) != ex) {
          result = !ex;
          decided = true;
          break;
        }
      if (!decided) {
        bool found = search(s, local, 0, ex);
        result = ex ? found : !found;
      }
      break;
    }
    default: break;
  }
  memo_.insert(sid, vals, s.nfree, h, result);
  return result;
}

// ---------------------------------------------------------------------------

const uint8_t* BoolContext::Memo::find(int shape, const uint32_t* vals, int n, uint64_t h) const {
  const size_t mask = slots_.size() - 1;
  for (size_t i = h & mask;; i = (i + 1) & mask) {
    const Slot& sl = slots_[i];
    if (sl.shape < 0) return nullptr;
    if (sl.hash == h && sl.shape == shape && sl.len == n &&
        std::memcmp(arena_.data() + sl.offset, vals, sizeof(uint32_t) * static_cast<size_t>(n)) == 0)
      return &sl.value;
  }
}

void BoolContext::Memo::insert(int shape, const uint32_t* vals, int n, uint64_t h, bool value) {
  if ((count_ + 1) * 2 > slots_.size()) grow();
  const size_t mask = slots_.size() - 1;
  size_t i = h & mask;
  while (slots_[i].shape >= 0) i = (i + 1) & mask;
  Slot& sl = slots_[i];
  sl.hash = h;
  sl.shape = shape;
  sl.len = static_cast<uint8_t>(n);
  sl.value = value ? 1 : 0;
  sl.offset = static_cast<uint32_t>(arena_.size());
  arena_.insert(arena_.end(), vals, vals + n);
  ++count_;
}

void BoolContext::Memo::grow() {
  std::vector<Slot> old(slots_.size() * 2);
  old.swap(slots_);
  const size_t mask = slots_.size() - 1;
  for (const auto& sl : old) {
    if (sl.shape < 0) continue;
    size_t i = sl.hash & mask;
    while (slots_[i].shape >= 0) i = (i + 1) & mask;
    slots_[i] = sl;
  }
}

}  // namespace wtl
