#include "wtl/tc.hpp"

#include "wtl/errors.hpp"
#include "wtl/macros.hpp"

#include <cctype>
#include <cmath>
#include <functional>
#include <map>
#include <regex>
#include <sstream>

namespace wtl {

const std::string& family_x() {
  static const std::string x = "x";
  return x;
}

const std::string& family_y(int i) {
  static const std::vector<std::string> ys = [] {
    std::vector<std::string> v(65);
    for (int k = 1; k < 65; ++k) v[static_cast<size_t>(k)] = "y" + std::to_string(k);
    return v;
  }();
  if (i < 1 || i > 64) throw InvalidInput("family member index out of range");
  return ys[static_cast<size_t>(i)];
}

void validate_family(const FormulaFamily& family) {
  if (family.members.empty()) throw InvalidInput("a family needs at least phi0");
  if (family.m() > 64) throw InvalidInput("families are limited to 64 members");
  for (int k = 0; k <= family.m(); ++k) {
    const Formula& f = family.members[static_cast<size_t>(k)];
    if (!f) throw InvalidInput("family member phi" + std::to_string(k) + " is missing");
    for (const auto& v : f->free_vars()) {
      bool ok = v == family_x();
      for (int i = 1; i <= k && !ok; ++i) ok = v == family_y(i);
      if (!ok)
        throw InvalidInput("phi" + std::to_string(k) + " has stray free variable '" + v + "'");
    }
  }
}

// ---------------------------------------------------------------------------
// Family files

FamilyFile parse_family(std::string_view text, const Semiring& fallback) {
  FamilyFile out;
  static const std::regex entry(R"(^\s*phi(\d+)\s*:(.*)$)");
  struct Pending {
    int index;
    int line;
    std::string text;
  };
  std::vector<Pending> items;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::string l = raw.substr(0, raw.find('#'));
    std::smatch m;
    if (std::regex_match(l, m, entry)) {
      if (m[1].str().size() > 3) throw ParseError("family: member index too large", line, 1);
      items.push_back({std::stoi(m[1].str()), line, m[2].str()});
      continue;
    }
    size_t b = l.find_first_not_of(" \t\r");
    if (b == std::string::npos) {
      if (!items.empty()) items.back().text += "\n";
      continue;
    }
    if (!items.empty()) {
      items.back().text += "\n" + l;
      continue;
    }
    std::string body = l.substr(b);
    size_t sp = body.find_first_of(" \t");
    std::string key = body.substr(0, sp);
    std::string rest = sp == std::string::npos ? "" : body.substr(sp + 1);
    try {
      if (key == "semiring") {
        size_t e = rest.find_last_not_of(" \t\r");
        out.semiring = Semiring::by_name(rest.substr(0, e == std::string::npos ? 0 : e + 1));
      } else if (key == "alphabet") {
        out.alphabet = RankedAlphabet::parse(rest);
      } else {
        throw ParseError("family: expected 'phiK:' entry, got '" + key + "'", line, static_cast<int>(b) + 1);
      }
    } catch (const InvalidInput& e) {
      throw ParseError(std::string("family: ") + e.what(), line, 1);
    }
  }
  const Semiring& s = out.semiring ? *out.semiring : fallback;
  std::map<int, Formula> by_index;
  for (const auto& it : items) {
    if (by_index.count(it.index))
      throw ParseError("family: phi" + std::to_string(it.index) + " defined twice", it.line, 1);
    try {
      by_index[it.index] = parse_formula(it.text, s);
    } catch (const ParseError& e) {
      throw ParseError(std::string("family phi") + std::to_string(it.index) + ": parse error",
                       it.line + e.line() - 1, e.column());
    }
  }
  if (by_index.empty()) throw ParseError("family: no members", line, 1);
  for (int k = 0; k <= by_index.rbegin()->first; ++k) {
    auto f = by_index.find(k);
    if (f == by_index.end()) throw ParseError("family: phi" + std::to_string(k) + " is missing", line, 1);
    out.family.members.push_back(f->second);
  }
  try {
    validate_family(out.family);
  } catch (const InvalidInput& e) {
    throw ParseError(std::string("family: ") + e.what(), line, 1);
  }
  return out;
}

std::string render_family(const FormulaFamily& family, const Semiring* s, const RankedAlphabet* sigma) {
  std::ostringstream out;
  if (s) out << "semiring " << s->name() << "\n";
  if (sigma) out << "alphabet " << sigma->render() << "\n";
  for (int k = 0; k <= family.m(); ++k)
    out << "phi" << k << ": " << to_sexpr(family.members[static_cast<size_t>(k)]) << "\n";
  return out.str();
}

// ---------------------------------------------------------------------------
// Progress formulas

Progress Progress::desc_plus() { return Progress(); }

Progress Progress::bounded(int n) {
  if (n < 1) throw InvalidInput("bounded progress needs n >= 1");
  Progress p;
  p.kind_ = Kind::Bounded;
  p.n_ = n;
  return p;
}

Progress Progress::custom(Formula f) {
  if (!f || !f->in(Fragment::BMSO)) throw InvalidInput("a progress formula must be Boolean (BMSO)");
  for (const auto& v : f->free_vars())
    if (v != "x" && v != "y") throw InvalidInput("a progress formula may only use x and y free");
  Progress p;
  p.kind_ = Kind::Custom;
  p.custom_ = std::move(f);
  return p;
}

Progress Progress::parse(std::string_view text) {
  if (text == "desc+" || text == "desc_plus") return desc_plus();
  if (text.substr(0, 8) == "bounded:") {
    std::string n(text.substr(8));
    if (n.empty() || n.size() > 4 || !std::all_of(n.begin(), n.end(), [](unsigned char c) { return std::isdigit(c); }))
      throw InvalidInput("bounded:N needs a positive integer N");
    return bounded(std::stoi(n));
  }
  throw InvalidInput("unknown progress '" + std::string(text) + "' (use desc+ or bounded:N)");
}

std::string Progress::name() const {
  switch (kind_) {
    case Kind::DescPlus: return "desc+";
    case Kind::Bounded: return "bounded:" + std::to_string(n_);
    case Kind::Custom: return "custom";
  }
  return "";
}

Formula Progress::formula(int maxrk) const {
  switch (kind_) {
    case Kind::DescPlus: return macros::desc_plus("x", "y", maxrk);
    case Kind::Bounded: return macros::desc_range("x", "y", 1, n_, maxrk);
    case Kind::Custom: return custom_;
  }
  return custom_;
}

namespace {

// psi(v, w) for all node pairs, row-major.
std::vector<char> progress_table(const Progress& psi, const IndexedTree& t, Evaluator* ev) {
  const size_t n = t.size();
  std::vector<char> rel(n * n, 0);
  if (psi.kind() != Progress::Kind::Custom) {
    for (size_t v = 0; v < n; ++v)
      for (size_t w = v + 1; w < t.end(v); ++w) {
        int d = t.depth(w) - t.depth(v);
        rel[v * n + w] = psi.kind() == Progress::Kind::DescPlus || d <= psi.bound();
      }
    return rel;
  }
  const Formula f = psi.formula(1);
  static const std::string x = "x", y = "y";
  for (size_t v = 0; v < n; ++v)
    for (size_t w = 0; w < n; ++w) {
      Env e;
      e.push(x, static_cast<uint32_t>(v));
      e.push(y, static_cast<uint32_t>(w));
      if (ev->holds(f, e)) {
        if (!(v < w && w < t.end(v)))
          throw InvalidInput("progress formula relates " + render_position(t.position(v)) + " to " +
                             render_position(t.position(w)) + ", which is not a proper descendant");
        rel[v * n + w] = 1;
      }
    }
  return rel;
}

}  // namespace

void validate_progress(const Progress& psi, const RankedAlphabet& sigma, size_t max_size) {
  if (psi.kind() != Progress::Kind::Custom) return;
  auto program = std::make_shared<BoolProgram>();
  for (const auto& t : enumerate_trees(sigma, max_size)) {
    IndexedTree it(t);
    Evaluator ev(Semiring::boolean(), it, {}, program);
    try {
      progress_table(psi, it, &ev);
    } catch (const InvalidInput& e) {
      throw InvalidInput(std::string(e.what()) + " on " + render_tree(t));
    }
  }
}

// ---------------------------------------------------------------------------
// Level table

TcTable::TcTable(Semiring s, size_t nodes)
    : s_(std::move(s)), nodes_(nodes), t_(nodes * (nodes + 1), s_.zero()) {}

const Weight& TcTable::level(size_t v, size_t l) const {
  if (l < 1 || l > nodes_) return s_.zero();
  return t_[v * (nodes_ + 1) + l];
}

Weight TcTable::total(size_t v) const {
  Weight acc = s_.zero();
  for (size_t l = 1; l <= nodes_; ++l) acc = s_.add(acc, level(v, l));
  return acc;
}

TcTable tc_levels(const Semiring& s, const Progress& psi, const FormulaFamily& family, const Tree& xi,
                  const TcOptions& opts) {
  validate_family(family);
  IndexedTree t(xi);
  const size_t n = t.size();
  const int m = family.m();
  if (m >= 1 && m * std::pow(static_cast<double>(n), m) > opts.tuple_cap)
    throw ExplosionGuard("tuple space m*|pos|^m = " + std::to_string(m * std::pow(double(n), m)) +
                         " exceeds the tuple cap " + std::to_string(opts.tuple_cap));
  Evaluator ev(s, t, opts.eval, opts.program);
  const auto rel = progress_table(psi, t, &ev);

  std::vector<bool> trivial(static_cast<size_t>(m) + 1);
  for (int k = 0; k <= m; ++k) {
    const Formula& f = family.members[static_cast<size_t>(k)];
    trivial[static_cast<size_t>(k)] = f->kind() == FormulaKind::Const && f->weight().is_zero();
  }
  // Deepest member worth extending a tuple to.
  int reach = 0;
  for (int k = 1; k <= m; ++k)
    if (!trivial[static_cast<size_t>(k)]) reach = k;

  TcTable table(s, n);
  std::vector<uint32_t> tuple;
  // conv[d][j]: sum over level splits of the first d entries totalling j.
  std::vector<std::vector<Weight>> conv(static_cast<size_t>(reach) + 1,
                                        std::vector<Weight>(n + 1, s.zero()));
  for (size_t vi = n; vi-- > 0;) {
    const uint32_t v = static_cast<uint32_t>(vi);
    {
      Env env;
      env.push(family_x(), v);
      table.at(v, 1) = ev.eval(family.members[0], env);
    }
    if (reach == 0) continue;
    std::vector<uint32_t> cands;
    for (size_t w = v + 1; w < t.end(v); ++w)
      if (rel[v * n + w]) cands.push_back(static_cast<uint32_t>(w));
    conv[0].assign(n + 1, s.zero());
    conv[0][0] = s.one();

    std::function<void(size_t, size_t)> dfs = [&](size_t depth, size_t from) {
      // depth entries are chosen; the next must start at or after 'from'.
      if (depth >= 1 && !trivial[depth]) {
        Env env;
        env.push(family_x(), v);
        for (size_t i = 0; i < depth; ++i) env.push(family_y(static_cast<int>(i) + 1), tuple[i]);
        Weight w = ev.eval(family.members[depth], env);
        if (!s.is_zero(w))
          for (size_t j = depth; j + 1 <= n; ++j) {
            const Weight& c = conv[depth][j];
            if (!s.is_zero(c)) table.at(v, j + 1) = s.add(table.at(v, j + 1), s.mul(w, c));
          }
      }
      if (static_cast<int>(depth) == reach) return;
      for (uint32_t w : cands) {
        if (w < from) continue;
        const auto& prev = conv[depth];
        auto& next = conv[depth + 1];
        next.assign(n + 1, s.zero());
        bool any = false;
        for (size_t a = depth; a < n; ++a) {
          if (s.is_zero(prev[a])) continue;
          for (size_t b = 1; a + b <= n; ++b) {
            const Weight& tb = table.level(w, b);
            if (s.is_zero(tb)) continue;
            next[a + b] = s.add(next[a + b], s.mul(prev[a], tb));
            any = true;
          }
        }
        if (!any) continue;
        tuple.push_back(w);
        dfs(depth + 1, t.end(w));
        tuple.pop_back();
      }
    };
    dfs(0, 0);
  }
  return table;
}

Weight eval_tc(const Semiring& s, const Progress& psi, const FormulaFamily& family, const Tree& xi,
               const Position& v, const TcOptions& opts) {
  IndexedTree t(xi);
  auto idx = t.index_of(v);
  if (!idx) throw PositionOutOfRange("position " + render_position(v) + " is not in the tree");
  return tc_levels(s, psi, family, xi, opts).total(*idx);
}

// ---------------------------------------------------------------------------
// Formula construction

namespace {

void compositions(int total, int parts, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
  if (parts == 0) {
    if (total == 0) out.push_back(cur);
    return;
  }
  for (int first = 1; first <= total - (parts - 1); ++first) {
    cur.push_back(first);
    compositions(total - first, parts - 1, cur, out);
    cur.pop_back();
  }
}

}  // namespace

Formula build_tc_level(const Progress& psi, const FormulaFamily& family, int l, const std::string& x,
                       int maxrk, SemiringKind kind) {
  if (l < 1) throw InvalidInput("TC levels start at 1");
  validate_family(family);
  const Formula psi_f = psi.formula(maxrk);
  // levels[j] is TC^j over the canonical variable "x".
  std::vector<Formula> levels(static_cast<size_t>(l) + 1);
  levels[1] = family.members[0];
  for (int j = 2; j <= l; ++j) {
    std::vector<Formula> alts;
    for (int k = 1; k <= family.m(); ++k) {
      std::vector<std::vector<int>> splits;
      std::vector<int> cur;
      compositions(j - 1, k, cur, splits);
      if (splits.empty()) continue;
      macros::Names ys;
      std::map<std::string, std::string> ren;
      for (int i = 1; i <= k; ++i) {
        ys.push_back(fresh_name("y"));
        ren[family_y(i)] = ys.back();
      }
      std::vector<Formula> branches;
      for (const auto& split : splits) {
        std::vector<Formula> parts;
        for (int i = 0; i < k; ++i)
          parts.push_back(rename_free(levels[static_cast<size_t>(split[static_cast<size_t>(i)])],
                                      {{family_x(), ys[static_cast<size_t>(i)]}}));
        branches.push_back(mso::conj_all(parts, kind));
      }
      Formula body = mso::conj_all({macros::progress_tuple(psi_f, "x", "y", family_x(), ys, maxrk),
                                    rename_free(family.members[static_cast<size_t>(k)], ren),
                                    mso::disj_all(branches, kind)},
                                   kind);
      for (auto it = ys.rbegin(); it != ys.rend(); ++it) body = mso::exists(*it, body);
      alts.push_back(body);
    }
    levels[static_cast<size_t>(j)] = mso::disj_all(alts, kind);
  }
  Formula out = levels[static_cast<size_t>(l)];
  return x == family_x() ? out : rename_free(out, {{family_x(), x}});
}

FormulaFamily lift_bounded(const FormulaFamily& family, int n, int maxrk) {
  if (n < 1) throw InvalidInput("lift_bounded needs n >= 1");
  validate_family(family);
  const Formula psi = macros::desc_range("x", "y", 1, n, maxrk);
  FormulaFamily out;
  out.members.push_back(family.members[0]);
  for (int k = 1; k <= family.m(); ++k) {
    macros::Names ys;
    for (int i = 1; i <= k; ++i) ys.push_back(family_y(i));
    out.members.push_back(
        mso::conj(macros::progress_tuple(psi, "x", "y", family_x(), ys, maxrk), family.members[static_cast<size_t>(k)]));
  }
  return out;
}

}  // namespace wtl
