#include "wtl/tree.hpp"

#include "wtl/errors.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <set>
#include <sstream>

namespace wtl {

Position Position::child(int i) const {
  auto p = path_;
  p.push_back(i);
  return Position(std::move(p));
}

Position Position::concat(const Position& w) const {
  auto p = path_;
  p.insert(p.end(), w.path_.begin(), w.path_.end());
  return Position(std::move(p));
}

Position Position::prefix(size_t len) const {
  return Position(std::vector<int>(path_.begin(), path_.begin() + static_cast<long>(len)));
}

bool Position::is_prefix_of(const Position& other) const {
  return path_.size() <= other.path_.size() &&
         std::equal(path_.begin(), path_.end(), other.path_.begin());
}

// ---------------------------------------------------------------------------

RankedAlphabet::RankedAlphabet(std::initializer_list<std::pair<const std::string, int>> entries) {
  for (const auto& [s, r] : entries) add(s, r);
}

void RankedAlphabet::add(const std::string& symbol, int rank) {
  if (symbol.empty()) throw InvalidInput("empty symbol name");
  const bool well_formed =
      !std::isdigit(static_cast<unsigned char>(symbol[0])) &&
      std::all_of(symbol.begin(), symbol.end(), [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; });
  if (!well_formed) throw InvalidInput("malformed symbol name '" + symbol + "'");
  if (rank < 0) throw InvalidInput("negative rank for '" + symbol + "'");
  if (variable_index(symbol) > 0)
    throw InvalidInput("symbol name '" + symbol + "' is reserved for slice variables");
  auto [it, inserted] = ranks_.emplace(symbol, rank);
  if (!inserted && it->second != rank)
    throw InvalidInput("symbol '" + symbol + "' declared with two ranks");
}

std::optional<int> RankedAlphabet::rank(const std::string& symbol) const {
  auto it = ranks_.find(symbol);
  if (it == ranks_.end()) return std::nullopt;
  return it->second;
}

int RankedAlphabet::max_rank() const {
  int m = 0;
  for (const auto& [s, r] : ranks_) m = std::max(m, r);
  return m;
}

std::vector<std::string> RankedAlphabet::symbols_of_rank(int r) const {
  std::vector<std::string> out;
  for (const auto& [s, rk] : ranks_)
    if (rk == r) out.push_back(s);
  return out;
}

RankedAlphabet RankedAlphabet::parse(std::string_view text) {
  RankedAlphabet a;
  std::string buf(text);
  std::replace(buf.begin(), buf.end(), ',', ' ');
  std::istringstream in(buf);
  std::string tok;
  while (in >> tok) {
    auto colon = tok.rfind(':');
    if (colon == std::string::npos || colon == 0 || colon + 1 == tok.size())
      throw InvalidInput("alphabet entry '" + tok + "' is not of the form name:rank");
    std::string r = tok.substr(colon + 1);
    if (!std::all_of(r.begin(), r.end(), [](unsigned char c) { return std::isdigit(c) != 0; }))
      throw InvalidInput("alphabet entry '" + tok + "' has a malformed rank");
    a.add(tok.substr(0, colon), std::stoi(r));
  }
  if (a.empty()) throw InvalidInput("empty alphabet");
  return a;
}

std::string RankedAlphabet::render() const {
  std::string out;
  for (const auto& [s, r] : ranks_) {
    if (!out.empty()) out += ' ';
    out += s + ":" + std::to_string(r);
  }
  return out;
}

void RankedAlphabet::validate(const Tree& t) const {
  auto r = rank(t.symbol);
  if (!r) throw InvalidInput("symbol '" + t.symbol + "' is not in the alphabet");
  if (*r != static_cast<int>(t.children.size()))
    throw InvalidInput("symbol '" + t.symbol + "' has rank " + std::to_string(*r) + " but " +
                       std::to_string(t.children.size()) + " children");
  for (const auto& c : t.children) validate(c);
}

RankedAlphabet RankedAlphabet::infer(const Tree& t) {
  RankedAlphabet a;
  std::function<void(const Tree&)> go = [&](const Tree& s) {
    a.add(s.symbol, static_cast<int>(s.children.size()));
    for (const auto& c : s.children) go(c);
  };
  go(t);
  return a;
}

// ---------------------------------------------------------------------------

size_t tree_size(const Tree& t) {
  size_t n = 1;
  for (const auto& c : t.children) n += tree_size(c);
  return n;
}

int tree_height(const Tree& t) {
  int h = 0;
  for (const auto& c : t.children) h = std::max(h, 1 + tree_height(c));
  return h;
}

namespace {
void collect_positions(const Tree& t, std::vector<int>& path, std::vector<Position>& out) {
  out.emplace_back(path);
  for (size_t i = 0; i < t.children.size(); ++i) {
    path.push_back(static_cast<int>(i) + 1);
    collect_positions(t.children[i], path, out);
    path.pop_back();
  }
}
}  // namespace

std::vector<Position> positions(const Tree& t) {
  std::vector<Position> out;
  std::vector<int> path;
  collect_positions(t, path, out);
  return out;
}

bool has_position(const Tree& t, const Position& u) {
  const Tree* cur = &t;
  for (int i : u.path()) {
    if (i < 1 || static_cast<size_t>(i) > cur->children.size()) return false;
    cur = &cur->children[static_cast<size_t>(i) - 1];
  }
  return true;
}

const Tree& subtree_at(const Tree& t, const Position& u) {
  const Tree* cur = &t;
  for (int i : u.path()) {
    if (i < 1 || static_cast<size_t>(i) > cur->children.size())
      throw PositionOutOfRange("position " + render_position(u) + " is not in the tree");
    cur = &cur->children[static_cast<size_t>(i) - 1];
  }
  return *cur;
}

Tree replace_at(const Tree& t, const Position& u, const Tree& s) {
  if (!has_position(t, u))
    throw PositionOutOfRange("position " + render_position(u) + " is not in the tree");
  Tree out = t;
  Tree* cur = &out;
  for (int i : u.path()) cur = &cur->children[static_cast<size_t>(i) - 1];
  *cur = s;
  return out;
}

const std::string& label_at(const Tree& t, const Position& u) { return subtree_at(t, u).symbol; }

bool lex_leq(const Position& u, const Position& v) { return u <= v; }

// ---------------------------------------------------------------------------

namespace {

class TreeParser {
 public:
  explicit TreeParser(std::string_view text) : s_(text) {}

  Tree parse_all() {
    Tree t = parse();
    skip();
    if (i_ != s_.size()) fail("trailing input");
    return t;
  }

 private:
  static bool is_name_char(char c) {
    return !std::isspace(static_cast<unsigned char>(c)) && c != '(' && c != ')' && c != ',';
  }
  void skip() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) {
      if (s_[i_] == '\n') {
        ++line_;
        line_start_ = i_ + 1;
      }
      ++i_;
    }
  }
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError("tree: " + msg, line_, static_cast<int>(i_ - line_start_) + 1);
  }
  Tree parse() {
    skip();
    size_t b = i_;
    while (i_ < s_.size() && is_name_char(s_[i_])) ++i_;
    if (b == i_) fail("expected a symbol");
    if (std::isdigit(static_cast<unsigned char>(s_[b]))) {
      i_ = b;
      fail("symbol names cannot start with a digit");
    }
    Tree t(std::string(s_.substr(b, i_ - b)));
    skip();
    if (i_ < s_.size() && s_[i_] == '(') {
      ++i_;
      for (;;) {
        t.children.push_back(parse());
        skip();
        if (i_ < s_.size() && s_[i_] == ',') {
          ++i_;
          continue;
        }
        if (i_ < s_.size() && s_[i_] == ')') {
          ++i_;
          break;
        }
        fail("expected ',' or ')'");
      }
    }
    return t;
  }

  std::string_view s_;
  size_t i_ = 0;
  int line_ = 1;
  size_t line_start_ = 0;
};

}  // namespace

Tree parse_tree(std::string_view text) { return TreeParser(text).parse_all(); }

std::string render_tree(const Tree& t) {
  std::string out = t.symbol;
  if (!t.children.empty()) {
    out += '(';
    for (size_t i = 0; i < t.children.size(); ++i) {
      if (i) out += ',';
      out += render_tree(t.children[i]);
    }
    out += ')';
  }
  return out;
}

Position parse_position(std::string_view text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  if (s.empty() || s == "e" || s == "eps" || s == "\xce\xb5") return Position();
  std::vector<int> path;
  size_t b = 0;
  while (b <= s.size()) {
    size_t e = s.find('.', b);
    if (e == std::string::npos) e = s.size();
    std::string part = s.substr(b, e - b);
    if (part.empty() ||
        !std::all_of(part.begin(), part.end(), [](unsigned char c) { return std::isdigit(c); }))
      throw InvalidInput("malformed position '" + std::string(text) + "'");
    int v = std::stoi(part);
    if (v < 1) throw InvalidInput("position entries must be positive in '" + std::string(text) + "'");
    path.push_back(v);
    b = e + 1;
  }
  return Position(std::move(path));
}

std::string render_position(const Position& u) {
  if (u.empty()) return "e";
  std::string out;
  for (size_t i = 0; i < u.length(); ++i) {
    if (i) out += '.';
    out += std::to_string(u[i]);
  }
  return out;
}

// ---------------------------------------------------------------------------

std::vector<Tree> enumerate_trees(const RankedAlphabet& sigma, size_t max_size) {
  std::vector<std::vector<Tree>> by_size(max_size + 1);
  for (size_t s = 1; s <= max_size; ++s) {
    for (const auto& [sym, rank] : sigma.entries()) {
      if (rank == 0) {
        if (s == 1) by_size[s].emplace_back(sym);
        continue;
      }
      if (s < 1 + static_cast<size_t>(rank)) continue;
      // distribute s-1 nodes over rank children, each at least 1
      std::vector<Tree> kids(static_cast<size_t>(rank));
      std::function<void(int, size_t)> go = [&](int i, size_t left) {
        if (i == rank) {
          if (left == 0) by_size[s].emplace_back(sym, kids);
          return;
        }
        size_t rest = static_cast<size_t>(rank - i - 1);
        for (size_t cs = 1; cs + rest <= left; ++cs)
          for (const auto& c : by_size[cs]) {
            kids[static_cast<size_t>(i)] = c;
            go(i + 1, left - cs);
          }
      };
      go(0, s - 1);
    }
    std::sort(by_size[s].begin(), by_size[s].end(),
              [](const Tree& a, const Tree& b) { return render_tree(a) < render_tree(b); });
  }
  std::vector<Tree> out;
  for (auto& v : by_size)
    for (auto& t : v) out.push_back(std::move(t));
  return out;
}

// ---------------------------------------------------------------------------

IndexedTree::IndexedTree(const Tree& t) : tree_(t) {
  std::function<int(const Tree&, int, int, int, std::vector<int>&)> go =
      [&](const Tree& s, int par, int ci, int d, std::vector<int>& path) -> int {
    size_t v = labels_.size();
    labels_.push_back(s.symbol);
    parent_.push_back(par);
    cidx_.push_back(ci);
    depth_.push_back(d);
    height_.push_back(0);
    end_.push_back(0);
    children_.emplace_back();
    positions_.emplace_back(path);
    int h = 0;
    for (size_t i = 0; i < s.children.size(); ++i) {
      path.push_back(static_cast<int>(i) + 1);
      size_t cv = labels_.size();
      children_[v].push_back(static_cast<int>(cv));
      h = std::max(h, 1 + go(s.children[i], static_cast<int>(v), static_cast<int>(i) + 1, d + 1, path));
      path.pop_back();
    }
    height_[v] = h;
    end_[v] = labels_.size();
    return h;
  };
  std::vector<int> path;
  go(tree_, -1, 0, 0, path);
}

std::optional<size_t> IndexedTree::index_of(const Position& u) const {
  size_t v = 0;
  for (int i : u.path()) {
    const auto& ch = children_[v];
    if (i < 1 || static_cast<size_t>(i) > ch.size()) return std::nullopt;
    v = static_cast<size_t>(ch[static_cast<size_t>(i) - 1]);
  }
  return v;
}

std::optional<size_t> IndexedTree::follow(size_t u, const std::vector<int>& w) const {
  size_t v = u;
  for (int i : w) {
    const auto& ch = children_[v];
    if (i < 1 || static_cast<size_t>(i) > ch.size()) return std::nullopt;
    v = static_cast<size_t>(ch[static_cast<size_t>(i) - 1]);
  }
  return v;
}

size_t IndexedTree::ancestor(size_t v, int k) const {
  for (int i = 0; i < k; ++i) v = static_cast<size_t>(parent_[v]);
  return v;
}

// ---------------------------------------------------------------------------

std::string variable_name(int i) { return "z" + std::to_string(i); }

int variable_index(std::string_view symbol) {
  if (symbol.size() < 2 || symbol[0] != 'z' || symbol[1] == '0') return 0;
  int v = 0;
  for (size_t i = 1; i < symbol.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(symbol[i]))) return 0;
    v = v * 10 + (symbol[i] - '0');
    if (v > 1000000) return 0;
  }
  return v;
}

namespace {

// Collects variable indices of an image tree in left-to-right order.
void image_variables(const Tree& t, std::vector<int>& out) {
  if (int i = variable_index(t.symbol); i > 0 && t.children.empty()) {
    out.push_back(i);
    return;
  }
  for (const auto& c : t.children) image_variables(c, out);
}

bool has_non_variable(const Tree& t) {
  if (variable_index(t.symbol) == 0) return true;
  return !t.children.empty();
}

Tree substitute(const Tree& image, const std::vector<const Tree*>& args) {
  if (int i = variable_index(image.symbol); i > 0 && image.children.empty())
    return *args[static_cast<size_t>(i) - 1];
  Tree out(image.symbol);
  out.children.reserve(image.children.size());
  for (const auto& c : image.children) out.children.push_back(substitute(c, args));
  return out;
}

}  // namespace

TreeHomomorphism::TreeHomomorphism(RankedAlphabet source, RankedAlphabet target)
    : source_(std::move(source)), target_(std::move(target)) {}

void TreeHomomorphism::set_image(const std::string& symbol, Tree image) {
  auto r = source_.rank(symbol);
  if (!r) throw InvalidInput("homomorphism: '" + symbol + "' is not a source symbol");
  std::vector<int> vars;
  image_variables(image, vars);
  std::vector<int> expect(static_cast<size_t>(*r));
  for (int i = 0; i < *r; ++i) expect[static_cast<size_t>(i)] = i + 1;
  if (vars != expect)
    throw InvalidInput("homomorphism: image of '" + symbol +
                       "' must contain z1..zk exactly once, in order");
  if (!has_non_variable(image))
    throw InvalidInput("homomorphism: image of '" + symbol + "' must not be a bare variable");
  std::function<void(const Tree&)> check = [&](const Tree& s) {
    if (variable_index(s.symbol) > 0 && s.children.empty()) return;
    auto tr = target_.rank(s.symbol);
    if (!tr || *tr != static_cast<int>(s.children.size()))
      throw InvalidInput("homomorphism: image of '" + symbol + "' is not a target tree");
    for (const auto& c : s.children) check(c);
  };
  check(image);
  images_[symbol] = std::move(image);
}

const Tree& TreeHomomorphism::image(const std::string& symbol) const {
  auto it = images_.find(symbol);
  if (it == images_.end()) throw InvalidInput("homomorphism: no image for '" + symbol + "'");
  return it->second;
}

Tree TreeHomomorphism::apply(const Tree& t) const {
  std::vector<Tree> kids;
  kids.reserve(t.children.size());
  for (const auto& c : t.children) kids.push_back(apply(c));
  std::vector<const Tree*> args;
  for (const auto& k : kids) args.push_back(&k);
  return substitute(image(t.symbol), args);
}

Weight hom_preimage_count(const TreeHomomorphism& h, const Tree& t, const Semiring& s) {
  // Every image has a non-variable node, so a preimage has at most size(t)
  // nodes, and every subtree of a preimage maps onto a subtree of t.
  const size_t n = tree_size(t);
  std::set<Tree> targets;
  std::function<void(const Tree&)> collect = [&](const Tree& u) {
    targets.insert(u);
    for (const auto& c : u.children) collect(c);
  };
  collect(t);

  // by_size[k]: image -> number of source trees of size k with that image
  std::vector<std::map<Tree, BigInt>> by_size(n + 1);
  for (size_t sz = 1; sz <= n; ++sz) {
    for (const auto& [sym, rank] : h.source().entries()) {
      const Tree& img = h.image(sym);
      if (rank == 0) {
        if (sz == 1 && targets.count(img)) by_size[1][img] += 1;
        continue;
      }
      std::vector<const Tree*> args(static_cast<size_t>(rank));
      std::function<void(int, size_t, const BigInt&)> go = [&](int i, size_t left,
                                                               const BigInt& mult) {
        if (i == rank) {
          if (left != 0) return;
          Tree out = substitute(img, args);
          if (targets.count(out)) by_size[sz][out] += mult;
          return;
        }
        size_t rest = static_cast<size_t>(rank - i - 1);
        for (size_t cs = 1; cs + rest <= left; ++cs)
          for (const auto& [ct, cnt] : by_size[cs]) {
            args[static_cast<size_t>(i)] = &ct;
            go(i + 1, left - cs, mult * cnt);
          }
      };
      go(0, sz - 1, BigInt(1));
    }
  }
  BigInt total = 0;
  for (size_t sz = 1; sz <= n; ++sz) {
    auto it = by_size[sz].find(t);
    if (it != by_size[sz].end()) total += it->second;
  }
  return s.from_count(total);
}

}  // namespace wtl
