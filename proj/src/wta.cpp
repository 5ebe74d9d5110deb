#include "wtl/wta.hpp"

#include "wtl/errors.hpp"

#include <algorithm>
#include <cctype>
#include <optional>
#include <sstream>

namespace wtl {

Wta::Wta(Semiring s, RankedAlphabet sigma, int states, std::set<int> final_states)
    : s_(std::move(s)), sigma_(std::move(sigma)), states_(states), final_(std::move(final_states)) {
  if (states_ < 1) throw InvalidInput("an automaton needs at least one state");
  for (int q : final_)
    if (q < 0 || q >= states_) throw InvalidInput("final state " + std::to_string(q) + " out of range");
}

void Wta::set_transition(const std::string& symbol, const std::vector<int>& children, int target,
                         const Weight& w) {
  auto r = sigma_.rank(symbol);
  if (!r) throw InvalidInput("transition on unknown symbol '" + symbol + "'");
  if (*r != static_cast<int>(children.size()))
    throw InvalidInput("transition on '" + symbol + "' has the wrong number of children");
  for (int q : children)
    if (q < 0 || q >= states_) throw InvalidInput("state " + std::to_string(q) + " out of range");
  if (target < 0 || target >= states_)
    throw InvalidInput("state " + std::to_string(target) + " out of range");
  if (w.kind() != s_.kind()) throw InvalidInput("transition weight from another semiring");
  auto& row = delta_[symbol][children];
  if (row.empty()) row.assign(static_cast<size_t>(states_), s_.zero());
  row[static_cast<size_t>(target)] = w;
}

Weight Wta::transition(const std::string& symbol, const std::vector<int>& children,
                       int target) const {
  auto it = delta_.find(symbol);
  if (it == delta_.end()) return s_.zero();
  auto jt = it->second.find(children);
  if (jt == it->second.end()) return s_.zero();
  return jt->second[static_cast<size_t>(target)];
}

const std::map<std::vector<int>, Wta::Row>& Wta::transitions(const std::string& symbol) const {
  static const std::map<std::vector<int>, Row> empty;
  auto it = delta_.find(symbol);
  return it == delta_.end() ? empty : it->second;
}

std::vector<Weight> run(const Wta& a, const Tree& zeta, const std::vector<int>& context) {
  const Semiring& s = a.semiring();
  const size_t n = static_cast<size_t>(a.state_count());
  if (int i = variable_index(zeta.symbol);
      i > 0 && zeta.children.empty() && !a.alphabet().contains(zeta.symbol)) {
    if (static_cast<size_t>(i) > context.size())
      throw VariableOutOfRange("variable " + zeta.symbol + " has no context state");
    int q = context[static_cast<size_t>(i) - 1];
    if (q < 0 || q >= a.state_count()) throw InvalidInput("context state out of range");
    std::vector<Weight> out(n, s.zero());
    out[static_cast<size_t>(q)] = s.one();
    return out;
  }
  auto r = a.alphabet().rank(zeta.symbol);
  if (!r || *r != static_cast<int>(zeta.children.size()))
    throw InvalidInput("symbol '" + zeta.symbol + "' does not fit the automaton's alphabet");
  std::vector<std::vector<Weight>> kids;
  kids.reserve(zeta.children.size());
  for (const auto& c : zeta.children) kids.push_back(run(a, c, context));
  std::vector<Weight> out(n, s.zero());
  for (const auto& [children, row] : a.transitions(zeta.symbol)) {
    Weight prod = s.one();
    for (size_t i = 0; i < children.size() && !s.is_zero(prod); ++i)
      prod = s.mul(prod, kids[i][static_cast<size_t>(children[i])]);
    if (s.is_zero(prod)) continue;
    for (size_t q = 0; q < n; ++q)
      if (!s.is_zero(row[q])) out[q] = s.add(out[q], s.mul(row[q], prod));
  }
  return out;
}

Weight recognize(const Wta& a, const Tree& t) {
  auto v = run(a, t);
  Weight acc = a.semiring().zero();
  for (int q : a.final_states()) acc = a.semiring().add(acc, v[static_cast<size_t>(q)]);
  return acc;
}

Wta normalize_final(const Wta& a) {
  const Semiring& s = a.semiring();
  if (a.is_normalized()) return a;
  const int n = a.state_count();
  if (a.final_states().size() == 1) {
    // Swap the final state with 0.
    const int f = *a.final_states().begin();
    auto sw = [&](int q) { return q == f ? 0 : q == 0 ? f : q; };
    Wta out(s, a.alphabet(), n, {0});
    for (const auto& [sym, rank] : a.alphabet().entries())
      for (const auto& [children, row] : a.transitions(sym)) {
        std::vector<int> c2;
        for (int q : children) c2.push_back(sw(q));
        for (int q = 0; q < n; ++q)
          if (!s.is_zero(row[static_cast<size_t>(q)])) out.set_transition(sym, c2, sw(q), row[static_cast<size_t>(q)]);
      }
    return out;
  }
  // A fresh state 0 collects the weight of every final state at the root.
  // It never occurs below the root, since no transition reads it.
  Wta out(s, a.alphabet(), n + 1, {0});
  for (const auto& [sym, rank] : a.alphabet().entries())
    for (const auto& [children, row] : a.transitions(sym)) {
      std::vector<int> c2;
      for (int q : children) c2.push_back(q + 1);
      Weight to_final = s.zero();
      for (int q = 0; q < n; ++q) {
        const Weight& w = row[static_cast<size_t>(q)];
        if (s.is_zero(w)) continue;
        out.set_transition(sym, c2, q + 1, w);
        if (a.final_states().count(q)) to_final = s.add(to_final, w);
      }
      if (!s.is_zero(to_final)) out.set_transition(sym, c2, 0, to_final);
    }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

std::string strip(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

int parse_state(const std::string& t, int line, int states) {
  std::string s = strip(t);
  if (s.empty() || !std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); }) ||
      s.size() > 6)
    throw ParseError("automaton: malformed state '" + s + "'", line, 1);
  int q = std::stoi(s);
  if (states >= 0 && q >= states) throw ParseError("automaton: state " + s + " out of range", line, 1);
  return q;
}

}  // namespace

Wta parse_wta(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string raw;
  int line = 0;
  std::optional<Semiring> s;
  std::optional<RankedAlphabet> sigma;
  int states = -1;
  std::set<int> finals;
  bool have_final = false;
  struct T {
    std::string sym;
    std::vector<std::string> kids;
    std::string target, weight;
    int line;
  };
  std::vector<T> trans;
  auto fail = [&](const std::string& msg) -> ParseError {
    return ParseError("automaton: " + msg, line, 1);
  };
  while (std::getline(in, raw)) {
    ++line;
    std::string l = strip(raw.substr(0, raw.find('#')));
    if (l.empty()) continue;
    size_t sp = l.find_first_of(" \t");
    std::string key = l.substr(0, sp), rest = sp == std::string::npos ? "" : strip(l.substr(sp));
    try {
      if (key == "semiring") {
        s = Semiring::by_name(rest);
      } else if (key == "alphabet") {
        sigma = RankedAlphabet::parse(rest);
      } else if (key == "states") {
        states = parse_state(rest, line, -1);
      } else if (key == "final") {
        have_final = true;
        std::istringstream fs(rest);
        std::string q;
        while (fs >> q) finals.insert(parse_state(q, line, -1));
      } else if (key == "trans") {
        auto arrow = rest.find("->");
        auto colon = rest.rfind(':');
        if (arrow == std::string::npos || colon == std::string::npos || colon < arrow)
          throw fail("expected 'trans SYM(q1,..) -> q : w'");
        std::string lhs = strip(rest.substr(0, arrow));
        T t{"", {}, strip(rest.substr(arrow + 2, colon - arrow - 2)), strip(rest.substr(colon + 1)), line};
        auto open = lhs.find('(');
        if (open == std::string::npos) {
          t.sym = lhs;
        } else {
          if (lhs.back() != ')') throw fail("unbalanced parentheses");
          t.sym = strip(lhs.substr(0, open));
          std::string inner = lhs.substr(open + 1, lhs.size() - open - 2);
          std::istringstream ks(inner);
          std::string k;
          while (std::getline(ks, k, ',')) t.kids.push_back(k);
        }
        if (t.sym.empty()) throw fail("missing symbol");
        trans.push_back(std::move(t));
      } else {
        throw fail("unknown directive '" + key + "'");
      }
    } catch (const InvalidInput& e) {
      throw fail(e.what());
    }
  }
  if (!s) throw ParseError("automaton: missing 'semiring' line", line, 1);
  if (!sigma) throw ParseError("automaton: missing 'alphabet' line", line, 1);
  if (states < 1) throw ParseError("automaton: missing or empty 'states' line", line, 1);
  if (!have_final) throw ParseError("automaton: missing 'final' line", line, 1);
  for (int q : finals)
    if (q >= states) throw ParseError("automaton: final state out of range", line, 1);
  Wta a(*s, *sigma, states, finals);
  for (const auto& t : trans) {
    line = t.line;
    std::vector<int> kids;
    for (const auto& k : t.kids) kids.push_back(parse_state(k, line, states));
    int q = parse_state(t.target, line, states);
    try {
      a.set_transition(t.sym, kids, q, s->parse(t.weight));
    } catch (const InvalidInput& e) {
      throw fail(e.what());
    }
  }
  return a;
}

std::string render_wta(const Wta& a) {
  const Semiring& s = a.semiring();
  std::ostringstream out;
  out << "semiring " << s.name() << "\n";
  out << "alphabet " << a.alphabet().render() << "\n";
  out << "states " << a.state_count() << "\n";
  out << "final";
  for (int q : a.final_states()) out << ' ' << q;
  out << "\n";
  for (const auto& [sym, rank] : a.alphabet().entries())
    for (const auto& [children, row] : a.transitions(sym))
      for (size_t q = 0; q < row.size(); ++q) {
        if (s.is_zero(row[q])) continue;
        out << "trans " << sym;
        if (!children.empty()) {
          out << '(';
          for (size_t i = 0; i < children.size(); ++i) out << (i ? "," : "") << children[i];
          out << ')';
        }
        out << " -> " << q << " : " << s.render(row[q]) << "\n";
      }
  return out.str();
}

}  // namespace wtl
