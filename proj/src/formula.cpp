#include "wtl/formula.hpp"

#include "wtl/errors.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <functional>
#include <set>
#include <unordered_map>
#include <unordered_set>

namespace wtl {

std::string_view fragment_name(Fragment f) {
  switch (f) {
    case Fragment::MSO: return "MSO";
    case Fragment::FO: return "FO";
    case Fragment::BMSO: return "BMSO";
    case Fragment::BFO: return "BFO";
    case Fragment::BFOmod: return "BFO+mod";
    case Fragment::RMSO: return "RMSO";
    case Fragment::BMSOStep: return "BMSO-step";
    case Fragment::BFOmodStep: return "BFO+mod-step";
  }
  return "?";
}

bool is_so_variable(std::string_view name) {
  return !name.empty() && std::isupper(static_cast<unsigned char>(name[0]));
}

bool is_valid_variable(std::string_view name) {
  if (name.empty() || !std::isalpha(static_cast<unsigned char>(name[0]))) return false;
  return std::all_of(name.begin(), name.end(), [](unsigned char c) {
    return std::isalnum(c) || c == '_' || c == '\'';
  });
}

namespace {

size_t mix(size_t h, size_t v) { return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2)); }

std::vector<std::string> merge_sorted(const std::vector<std::string>& a,
                                      const std::vector<std::string>& b) {
  std::vector<std::string> out;
  out.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

using F = Fragment;

uint16_t bit(F f) { return static_cast<uint16_t>(1u << static_cast<int>(f)); }

FragmentSet compute_fragments(const FormulaNode& n) {
  uint16_t b = bit(F::MSO);
  auto has = [](const Formula& c, F f) { return c->in(f); };
  switch (n.kind()) {
    case FormulaKind::Const:
      b |= bit(F::FO) | bit(F::RMSO);
      if (n.weight().is_zero() || n.weight().is_one())
        b |= bit(F::BMSO) | bit(F::BFO) | bit(F::BFOmod);
      break;
    case FormulaKind::Label:
    case FormulaKind::Edge:
    case FormulaKind::Leq:
    case FormulaKind::In:  // set variables may occur free in FO
      b |= bit(F::FO) | bit(F::BMSO) | bit(F::BFO) | bit(F::BFOmod) | bit(F::RMSO);
      break;
    case FormulaKind::Mod:
      b |= bit(F::BMSO) | bit(F::BFOmod) | bit(F::RMSO);
      break;
    case FormulaKind::Not: {
      const auto& c = n.sub();
      for (F f : {F::FO, F::BMSO, F::BFO, F::BFOmod})
        if (has(c, f)) b |= bit(f);
      if (has(c, F::BMSOStep)) b |= bit(F::RMSO);
      break;
    }
    case FormulaKind::And:
      for (F f : {F::FO, F::BMSO, F::BFO, F::BFOmod, F::RMSO})
        if (has(n.left(), f) && has(n.right(), f)) b |= bit(f);
      break;
    case FormulaKind::Or:
      for (F f : {F::FO, F::RMSO})
        if (has(n.left(), f) && has(n.right(), f)) b |= bit(f);
      break;
    case FormulaKind::ExistsFO:
      for (F f : {F::FO, F::RMSO})
        if (has(n.sub(), f)) b |= bit(f);
      break;
    case FormulaKind::ForallFO:
      for (F f : {F::FO, F::BMSO, F::BFO, F::BFOmod})
        if (has(n.sub(), f)) b |= bit(f);
      if (has(n.sub(), F::BMSOStep)) b |= bit(F::RMSO);
      break;
    case FormulaKind::ExistsSO:
      if (has(n.sub(), F::RMSO)) b |= bit(F::RMSO);
      break;
    case FormulaKind::ForallSO:
      if (has(n.sub(), F::BMSO)) b |= bit(F::BMSO) | bit(F::RMSO);
      break;
  }
  // L-step closure: L formulas, constants, and Boolean combinations thereof.
  for (auto [base, step] : {std::pair{F::BMSO, F::BMSOStep}, std::pair{F::BFOmod, F::BFOmodStep}}) {
    bool s = (b & bit(base)) != 0;
    switch (n.kind()) {
      case FormulaKind::Const: s = true; break;
      case FormulaKind::Not: s = s || has(n.sub(), step); break;
      case FormulaKind::And:
      case FormulaKind::Or: s = s || (has(n.left(), step) && has(n.right(), step)); break;
      default: break;
    }
    if (s) b |= bit(step);
  }
  if (b & bit(F::BMSOStep)) b |= bit(F::RMSO);
  return FragmentSet(b);
}

}  // namespace

FormulaNode::FormulaNode(FormulaKind k, Weight w, std::string sym, int idx, int res,
                         std::string v1, std::string v2, Formula l, Formula r)
    : kind_(k),
      weight_(std::move(w)),
      symbol_(std::move(sym)),
      index_(idx),
      residue_(res),
      var1_(std::move(v1)),
      var2_(std::move(v2)),
      left_(std::move(l)),
      right_(std::move(r)) {
  size_t h = static_cast<size_t>(k) * 1315423911u;
  switch (k) {
    case FormulaKind::Const:
      h = mix(h, weight_.is_zero() ? 0 : weight_.is_one() ? 1 : 2);
      break;
    case FormulaKind::Label:
      free_ = {var1_};
      h = mix(mix(h, std::hash<std::string>{}(symbol_)), std::hash<std::string>{}(var1_));
      break;
    case FormulaKind::Mod:
      free_ = {var1_};
      h = mix(mix(mix(h, std::hash<std::string>{}(var1_)), static_cast<size_t>(index_)),
              static_cast<size_t>(residue_));
      break;
    case FormulaKind::Edge:
    case FormulaKind::Leq:
    case FormulaKind::In:
      free_ = var1_ == var2_ ? std::vector<std::string>{var1_}
                             : merge_sorted({var1_}, {var2_});
      h = mix(mix(mix(h, static_cast<size_t>(index_)), std::hash<std::string>{}(var1_)),
              std::hash<std::string>{}(var2_));
      break;
    case FormulaKind::Not:
      free_ = left_->free_vars();
      h = mix(h, left_->hash());
      size_ = 1 + left_->tree_size();
      break;
    case FormulaKind::Or:
    case FormulaKind::And:
      free_ = merge_sorted(left_->free_vars(), right_->free_vars());
      h = mix(mix(h, left_->hash()), right_->hash());
      size_ = 1 + left_->tree_size() + right_->tree_size();
      break;
    default:  // quantifiers
      free_ = left_->free_vars();
      free_.erase(std::remove(free_.begin(), free_.end(), var1_), free_.end());
      h = mix(mix(h, std::hash<std::string>{}(var1_)), left_->hash());
      size_ = 1 + left_->tree_size();
      break;
  }
  hash_ = h;
  fragments_ = compute_fragments(*this);
}

namespace mso {

namespace {
Formula make(FormulaKind k, Weight w, std::string sym, int idx, int res, std::string v1,
             std::string v2, Formula l, Formula r) {
  return std::make_shared<const FormulaNode>(k, std::move(w), std::move(sym), idx, res,
                                             std::move(v1), std::move(v2), std::move(l),
                                             std::move(r));
}

void require_fo(const std::string& v) {
  if (!is_valid_variable(v) || is_so_variable(v))
    throw InvalidInput("'" + v + "' is not a first-order variable name");
}
void require_so(const std::string& v) {
  if (!is_valid_variable(v) || !is_so_variable(v))
    throw InvalidInput("'" + v + "' is not a second-order variable name");
}
}  // namespace

Formula constant(const Weight& w) { return make(FormulaKind::Const, w, "", 0, 0, "", "", {}, {}); }

Formula label(const std::string& symbol, const std::string& x) {
  require_fo(x);
  return make(FormulaKind::Label, {}, symbol, 0, 0, x, "", {}, {});
}

Formula edge(int i, const std::string& x, const std::string& y) {
  require_fo(x);
  require_fo(y);
  if (i < 1) throw InvalidInput("edge index must be positive");
  return make(FormulaKind::Edge, {}, "", i, 0, x, y, {}, {});
}

Formula leq(const std::string& x, const std::string& y) {
  require_fo(x);
  require_fo(y);
  return make(FormulaKind::Leq, {}, "", 0, 0, x, y, {}, {});
}

Formula in(const std::string& x, const std::string& X) {
  require_fo(x);
  require_so(X);
  return make(FormulaKind::In, {}, "", 0, 0, x, X, {}, {});
}

Formula mod(const std::string& x, int n, int m) {
  require_fo(x);
  if (n < 1 || m < 0 || m >= n) throw InvalidInput("mod needs n >= 1 and 0 <= m < n");
  return make(FormulaKind::Mod, {}, "", n, m, x, "", {}, {});
}

Formula neg(Formula f) { return make(FormulaKind::Not, {}, "", 0, 0, "", "", std::move(f), {}); }

Formula disj(Formula a, Formula b) {
  return make(FormulaKind::Or, {}, "", 0, 0, "", "", std::move(a), std::move(b));
}

Formula conj(Formula a, Formula b) {
  return make(FormulaKind::And, {}, "", 0, 0, "", "", std::move(a), std::move(b));
}

Formula exists(const std::string& v, Formula f) {
  if (!is_valid_variable(v)) throw InvalidInput("'" + v + "' is not a variable name");
  return make(is_so_variable(v) ? FormulaKind::ExistsSO : FormulaKind::ExistsFO, {}, "", 0, 0, v,
              "", std::move(f), {});
}

Formula forall(const std::string& v, Formula f) {
  if (!is_valid_variable(v)) throw InvalidInput("'" + v + "' is not a variable name");
  return make(is_so_variable(v) ? FormulaKind::ForallSO : FormulaKind::ForallFO, {}, "", 0, 0, v,
              "", std::move(f), {});
}

namespace {
Formula fold(const std::vector<Formula>& fs, size_t b, size_t e, bool is_and) {
  if (e - b == 1) return fs[b];
  size_t mid = b + (e - b) / 2;
  auto l = fold(fs, b, mid, is_and), r = fold(fs, mid, e, is_and);
  return is_and ? conj(l, r) : disj(l, r);
}
}  // namespace

Formula conj_all(const std::vector<Formula>& fs, SemiringKind kind) {
  if (fs.empty()) return constant(Semiring(kind).one());
  return fold(fs, 0, fs.size(), true);
}

Formula disj_all(const std::vector<Formula>& fs, SemiringKind kind) {
  if (fs.empty()) return constant(Semiring(kind).zero());
  return fold(fs, 0, fs.size(), false);
}

Formula zero() {
  static const Formula z = constant(Semiring::boolean().zero());
  return z;
}

Formula one() {
  static const Formula o = constant(Semiring::boolean().one());
  return o;
}

}  // namespace mso

bool structurally_equal(const Formula& a, const Formula& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->kind() != b->kind() || a->hash() != b->hash()) return false;
  switch (a->kind()) {
    case FormulaKind::Const: {
      const auto &u = a->weight(), &v = b->weight();
      return u == v || (u.is_zero() && v.is_zero()) || (u.is_one() && v.is_one());
    }
    case FormulaKind::Label: return a->symbol() == b->symbol() && a->var() == b->var();
    case FormulaKind::Mod:
      return a->var() == b->var() && a->index() == b->index() && a->residue() == b->residue();
    case FormulaKind::Edge:
    case FormulaKind::Leq:
    case FormulaKind::In:
      return a->index() == b->index() && a->var() == b->var() && a->var2() == b->var2();
    case FormulaKind::Not: return structurally_equal(a->sub(), b->sub());
    case FormulaKind::Or:
    case FormulaKind::And:
      return structurally_equal(a->left(), b->left()) && structurally_equal(a->right(), b->right());
    default: return a->var() == b->var() && structurally_equal(a->sub(), b->sub());
  }
}

std::string fresh_name(std::string_view stem) {
  static std::atomic<uint64_t> counter{0};
  return std::string(stem) + "'" + std::to_string(counter.fetch_add(1) + 1);
}

namespace {

class Renamer {
 public:
  Formula run(const Formula& f, const std::map<std::string, std::string>& ren) {
    // Restrict to the free variables of f; nothing to do if disjoint.
    std::map<std::string, std::string> eff;
    for (const auto& v : f->free_vars()) {
      auto it = ren.find(v);
      if (it != ren.end() && it->second != v) eff.emplace(v, it->second);
    }
    if (eff.empty()) return f;
    std::string key;
    for (const auto& [a, b] : eff) key += a + "\x1f" + b + "\x1e";
    auto mk = std::make_pair(f.get(), key);
    if (auto it = memo_.find(mk); it != memo_.end()) return it->second;
    Formula out = rebuild(f, eff);
    memo_.emplace(mk, out);
    return out;
  }

 private:
  static const std::string& get(const std::map<std::string, std::string>& m, const std::string& v) {
    auto it = m.find(v);
    return it == m.end() ? v : it->second;
  }

  Formula rebuild(const Formula& f, const std::map<std::string, std::string>& m) {
    using K = FormulaKind;
    switch (f->kind()) {
      case K::Const: return f;
      case K::Label: return mso::label(f->symbol(), get(m, f->var()));
      case K::Mod: return mso::mod(get(m, f->var()), f->index(), f->residue());
      case K::Edge: return mso::edge(f->index(), get(m, f->var()), get(m, f->var2()));
      case K::Leq: return mso::leq(get(m, f->var()), get(m, f->var2()));
      case K::In: return mso::in(get(m, f->var()), get(m, f->var2()));
      case K::Not: return mso::neg(run(f->sub(), m));
      case K::Or: return mso::disj(run(f->left(), m), run(f->right(), m));
      case K::And: return mso::conj(run(f->left(), m), run(f->right(), m));
      default: {
        const std::string& v = f->var();
        auto inner = m;
        inner.erase(v);
        bool capture = false;
        for (const auto& [a, b] : inner)
          if (b == v) capture = true;
        std::string nv = v;
        if (capture) {
          std::string stem = v.substr(0, v.find('\''));
          nv = fresh_name(stem);
          inner[v] = nv;
        }
        Formula body = run(f->sub(), inner);
        bool ex = f->kind() == K::ExistsFO || f->kind() == K::ExistsSO;
        return ex ? mso::exists(nv, body) : mso::forall(nv, body);
      }
    }
  }

  std::map<std::pair<const FormulaNode*, std::string>, Formula> memo_;
};

}  // namespace

Formula rename_free(const Formula& f, const std::map<std::string, std::string>& renaming) {
  for (const auto& [a, b] : renaming)
    if (is_so_variable(a) != is_so_variable(b))
      throw InvalidInput("renaming '" + a + "' to '" + b + "' changes the variable order");
  return Renamer().run(f, renaming);
}

// ---------------------------------------------------------------------------

namespace {

void print(const Formula& f, std::string& out) {
  using K = FormulaKind;
  switch (f->kind()) {
    case K::Const: {
      out += "(const ";
      out += Semiring(f->weight().kind()).render(f->weight());
      out += ')';
      return;
    }
    case K::Label: out += "(label " + f->symbol() + " " + f->var() + ")"; return;
    case K::Edge:
      out += "(edge " + std::to_string(f->index()) + " " + f->var() + " " + f->var2() + ")";
      return;
    case K::Leq: out += "(leq " + f->var() + " " + f->var2() + ")"; return;
    case K::In: out += "(in " + f->var() + " " + f->var2() + ")"; return;
    case K::Mod:
      out += "(mod " + f->var() + " " + std::to_string(f->index()) + " " +
             std::to_string(f->residue()) + ")";
      return;
    case K::Not:
      out += "(not ";
      print(f->sub(), out);
      out += ')';
      return;
    case K::Or:
    case K::And:
      out += f->kind() == K::Or ? "(or " : "(and ";
      print(f->left(), out);
      out += ' ';
      print(f->right(), out);
      out += ')';
      return;
    default: {
      static const std::map<K, const char*> names = {{K::ExistsFO, "exists1"},
                                                     {K::ForallFO, "forall1"},
                                                     {K::ExistsSO, "exists2"},
                                                     {K::ForallSO, "forall2"}};
      out += '(';
      out += names.at(f->kind());
      out += ' ' + f->var() + ' ';
      print(f->sub(), out);
      out += ')';
      return;
    }
  }
}

struct Token {
  enum Type { Open, Close, Atom, End } type;
  std::string text;
  int line, col;
};

class FormulaParser {
 public:
  FormulaParser(std::string_view text, const Semiring& s) : src_(text), s_(s) { advance(); }

  Formula parse_all() {
    Formula f = parse();
    if (tok_.type != Token::End) fail("trailing input");
    return f;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError("formula: " + msg, tok_.line, tok_.col);
  }

  void advance() {
    for (;;) {
      while (i_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[i_]))) step();
      if (i_ < src_.size() && src_[i_] == '#') {
        while (i_ < src_.size() && src_[i_] != '\n') step();
        continue;
      }
      break;
    }
    tok_.line = line_;
    tok_.col = col_;
    if (i_ >= src_.size()) {
      tok_.type = Token::End;
      tok_.text.clear();
      return;
    }
    char c = src_[i_];
    if (c == '(' || c == ')') {
      tok_.type = c == '(' ? Token::Open : Token::Close;
      tok_.text = std::string(1, c);
      step();
      return;
    }
    size_t b = i_;
    while (i_ < src_.size() && !std::isspace(static_cast<unsigned char>(src_[i_])) &&
           src_[i_] != '(' && src_[i_] != ')' && src_[i_] != '#')
      step();
    tok_.type = Token::Atom;
    tok_.text = std::string(src_.substr(b, i_ - b));
  }

  void step() {
    if (src_[i_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++i_;
  }

  std::string atom(const char* what) {
    if (tok_.type != Token::Atom) fail(std::string("expected ") + what);
    std::string t = tok_.text;
    advance();
    return t;
  }

  std::string fo_var() {
    Token at = tok_;
    std::string v = atom("a variable");
    if (!is_valid_variable(v) || is_so_variable(v))
      throw ParseError("formula: '" + v + "' is not a first-order variable", at.line, at.col);
    return v;
  }

  std::string so_var() {
    Token at = tok_;
    std::string v = atom("a set variable");
    if (!is_valid_variable(v) || !is_so_variable(v))
      throw ParseError("formula: '" + v + "' is not a second-order variable", at.line, at.col);
    return v;
  }

  int integer(const char* what) {
    Token at = tok_;
    std::string t = atom(what);
    if (t.empty() || t.size() > 9 ||
        !std::all_of(t.begin(), t.end(), [](unsigned char c) { return std::isdigit(c); }))
      throw ParseError(std::string("formula: expected ") + what, at.line, at.col);
    return std::stoi(t);
  }

  void close() {
    if (tok_.type != Token::Close) fail("expected ')'");
    advance();
  }

  Formula parse() {
    if (tok_.type != Token::Open) fail("expected '('");
    advance();
    Token head_tok = tok_;
    std::string head = atom("an operator");
    Formula f;
    try {
      if (head == "const") {
        Token at = tok_;
        std::string w = atom("a weight");
        try {
          f = mso::constant(s_.parse(w));
        } catch (const InvalidInput& e) {
          throw ParseError(std::string("formula: ") + e.what(), at.line, at.col);
        }
      } else if (head == "label") {
        std::string sym = atom("a symbol");
        f = mso::label(sym, fo_var());
      } else if (head == "edge") {
        int i = integer("a child index");
        if (i < 1) fail("edge index must be positive");
        std::string x = fo_var();
        f = mso::edge(i, x, fo_var());
      } else if (head == "leq") {
        std::string x = fo_var();
        f = mso::leq(x, fo_var());
      } else if (head == "in") {
        std::string x = fo_var();
        f = mso::in(x, so_var());
      } else if (head == "mod") {
        std::string x = fo_var();
        int n = integer("a modulus");
        int m = integer("a residue");
        if (n < 1 || m >= n) fail("mod needs n >= 1 and m < n");
        f = mso::mod(x, n, m);
      } else if (head == "not") {
        f = mso::neg(parse());
      } else if (head == "and" || head == "or") {
        std::vector<Formula> parts;
        while (tok_.type == Token::Open) parts.push_back(parse());
        if (parts.size() < 2) fail("'" + head + "' needs at least two operands");
        f = parts[0];
        for (size_t i = 1; i < parts.size(); ++i)
          f = head == "and" ? mso::conj(f, parts[i]) : mso::disj(f, parts[i]);
      } else if (head == "exists1" || head == "forall1") {
        std::string v = fo_var();
        Formula body = parse();
        f = head == "exists1" ? mso::exists(v, body) : mso::forall(v, body);
      } else if (head == "exists2" || head == "forall2") {
        std::string v = so_var();
        Formula body = parse();
        f = head == "exists2" ? mso::exists(v, body) : mso::forall(v, body);
      } else {
        throw ParseError("formula: unknown operator '" + head + "'", head_tok.line, head_tok.col);
      }
    } catch (const InvalidInput& e) {
      throw ParseError(std::string("formula: ") + e.what(), head_tok.line, head_tok.col);
    }
    close();
    return f;
  }

  std::string_view src_;
  const Semiring& s_;
  size_t i_ = 0;
  int line_ = 1, col_ = 1;
  Token tok_{Token::End, "", 1, 1};
};

}  // namespace

std::string to_sexpr(const Formula& f) {
  std::string out;
  print(f, out);
  return out;
}

Formula parse_formula(std::string_view text, const Semiring& s) {
  return FormulaParser(text, s).parse_all();
}

size_t dag_size(const Formula& f) {
  std::unordered_set<const FormulaNode*> seen;
  std::vector<const FormulaNode*> stack{f.get()};
  while (!stack.empty()) {
    auto n = stack.back();
    stack.pop_back();
    if (!n || !seen.insert(n).second) continue;
    stack.push_back(n->left().get());
    stack.push_back(n->right().get());
  }
  return seen.size();
}

}  // namespace wtl
