#include "wtl/semiring.hpp"

#include "wtl/errors.hpp"

#include <algorithm>
#include <cctype>

namespace wtl {

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::string trim(std::string_view s) {
  size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

bool is_integer_literal(const std::string& s) {
  size_t i = (!s.empty() && (s[0] == '-' || s[0] == '+')) ? 1 : 0;
  if (i >= s.size()) return false;
  return std::all_of(s.begin() + static_cast<long>(i), s.end(),
                     [](unsigned char c) { return std::isdigit(c) != 0; });
}

BigInt big(const std::string& s) { return BigInt(s[0] == '+' ? s.substr(1) : s); }

Rational parse_rational(const std::string& s) {
  auto slash = s.find('/');
  if (slash == std::string::npos) {
    if (!is_integer_literal(s)) throw InvalidInput("malformed number '" + s + "'");
    return Rational(big(s));
  }
  std::string num = s.substr(0, slash), den = s.substr(slash + 1);
  if (!is_integer_literal(num) || !is_integer_literal(den) || den[0] == '-' || den[0] == '+')
    throw InvalidInput("malformed fraction '" + s + "'");
  BigInt d(den);
  if (d == 0) throw InvalidInput("zero denominator in '" + s + "'");
  return Rational(big(num), d);
}

std::string render_rational(const Rational& r) {
  using boost::multiprecision::denominator;
  using boost::multiprecision::numerator;
  if (denominator(r) == 1) return numerator(r).str();
  return numerator(r).str() + "/" + denominator(r).str();
}

}  // namespace

bool Weight::is_zero() const {
  switch (kind_) {
    case SemiringKind::Boolean: return !std::get<bool>(value_);
    case SemiringKind::Naturals: return std::get<BigInt>(value_) == 0;
    case SemiringKind::Tropical: return std::holds_alternative<Infinity>(value_);
    case SemiringKind::Viterbi: return std::get<Rational>(value_) == 0;
  }
  return false;
}

bool Weight::is_one() const {
  switch (kind_) {
    case SemiringKind::Boolean: return std::get<bool>(value_);
    case SemiringKind::Naturals: return std::get<BigInt>(value_) == 1;
    case SemiringKind::Tropical:
      return std::holds_alternative<Rational>(value_) && std::get<Rational>(value_) == 0;
    case SemiringKind::Viterbi: return std::get<Rational>(value_) == 1;
  }
  return false;
}

Semiring::Semiring(SemiringKind kind) : kind_(kind) {
  switch (kind) {
    case SemiringKind::Boolean:
      zero_ = Weight(kind, false);
      one_ = Weight(kind, true);
      break;
    case SemiringKind::Naturals:
      zero_ = Weight(kind, BigInt(0));
      one_ = Weight(kind, BigInt(1));
      break;
    case SemiringKind::Tropical:
      zero_ = Weight(kind, Weight::Infinity{});
      one_ = Weight(kind, Rational(0));
      break;
    case SemiringKind::Viterbi:
      zero_ = Weight(kind, Rational(0));
      one_ = Weight(kind, Rational(1));
      break;
  }
}

Semiring Semiring::by_name(std::string_view name) {
  std::string n = lower(name);
  if (n == "bool" || n == "boolean" || n == "b") return boolean();
  if (n == "nat" || n == "naturals" || n == "n") return naturals();
  if (n == "trop" || n == "tropical" || n == "minplus") return tropical();
  if (n == "viterbi" || n == "vit") return viterbi();
  throw InvalidInput("unknown semiring '" + std::string(name) + "'");
}

std::string_view Semiring::name() const {
  switch (kind_) {
    case SemiringKind::Boolean: return "bool";
    case SemiringKind::Naturals: return "nat";
    case SemiringKind::Tropical: return "tropical";
    case SemiringKind::Viterbi: return "viterbi";
  }
  return "?";
}

void Semiring::check(const Weight& w) const {
  if (w.kind() != kind_)
    throw InvalidInput("weight from a different semiring used with " + std::string(name()));
}

Weight Semiring::add(const Weight& a, const Weight& b) const {
  check(a);
  check(b);
  switch (kind_) {
    case SemiringKind::Boolean:
      return Weight(kind_, std::get<bool>(a.value()) || std::get<bool>(b.value()));
    case SemiringKind::Naturals:
      return Weight(kind_, BigInt(std::get<BigInt>(a.value()) + std::get<BigInt>(b.value())));
    case SemiringKind::Tropical:
      if (a.is_zero()) return b;
      if (b.is_zero()) return a;
      return std::get<Rational>(a.value()) <= std::get<Rational>(b.value()) ? a : b;
    case SemiringKind::Viterbi:
      return std::get<Rational>(a.value()) >= std::get<Rational>(b.value()) ? a : b;
  }
  return zero_;
}

Weight Semiring::mul(const Weight& a, const Weight& b) const {
  check(a);
  check(b);
  switch (kind_) {
    case SemiringKind::Boolean:
      return Weight(kind_, std::get<bool>(a.value()) && std::get<bool>(b.value()));
    case SemiringKind::Naturals:
      return Weight(kind_, BigInt(std::get<BigInt>(a.value()) * std::get<BigInt>(b.value())));
    case SemiringKind::Tropical:
      if (a.is_zero() || b.is_zero()) return zero_;
      return Weight(kind_,
                    Rational(std::get<Rational>(a.value()) + std::get<Rational>(b.value())));
    case SemiringKind::Viterbi:
      return Weight(kind_,
                    Rational(std::get<Rational>(a.value()) * std::get<Rational>(b.value())));
  }
  return zero_;
}

Weight Semiring::sum(std::span<const Weight> ws) const {
  Weight acc = zero_;
  for (const auto& w : ws) acc = add(acc, w);
  return acc;
}

Weight Semiring::product(std::span<const Weight> ws) const {
  Weight acc = one_;
  for (const auto& w : ws) {
    acc = mul(acc, w);
    if (acc.is_zero()) break;
  }
  return acc;
}

Weight Semiring::from_count(const BigInt& n) const {
  switch (kind_) {
    case SemiringKind::Naturals: return Weight(kind_, n);
    default: return n == 0 ? zero_ : one_;  // idempotent addition
  }
}

std::string Semiring::render(const Weight& w) const {
  check(w);
  switch (kind_) {
    case SemiringKind::Boolean: return std::get<bool>(w.value()) ? "1" : "0";
    case SemiringKind::Naturals: return std::get<BigInt>(w.value()).str();
    case SemiringKind::Tropical:
      if (w.is_zero()) return "inf";
      return render_rational(std::get<Rational>(w.value()));
    case SemiringKind::Viterbi: return render_rational(std::get<Rational>(w.value()));
  }
  return "?";
}

Weight Semiring::parse(std::string_view text) const {
  std::string s = trim(text);
  if (s.empty()) throw InvalidInput("empty weight literal");
  switch (kind_) {
    case SemiringKind::Boolean:
      if (s == "0" || s == "false") return zero_;
      if (s == "1" || s == "true") return one_;
      throw InvalidInput("boolean weight must be 0 or 1, got '" + s + "'");
    case SemiringKind::Naturals:
      if (!is_integer_literal(s) || s[0] == '-')
        throw InvalidInput("natural weight must be a non-negative integer, got '" + s + "'");
      return Weight(kind_, big(s));
    case SemiringKind::Tropical: {
      std::string l = lower(s);
      if (l == "inf" || l == "+inf" || l == "infinity") return zero_;
      return Weight(kind_, parse_rational(s));
    }
    case SemiringKind::Viterbi: {
      Rational r = parse_rational(s);
      if (r < 0 || r > 1) throw InvalidInput("viterbi weight must lie in [0,1], got '" + s + "'");
      return Weight(kind_, r);
    }
  }
  return zero_;
}

}  // namespace wtl
