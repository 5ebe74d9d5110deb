#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <span>
#include <string>
#include <string_view>
#include <variant>

namespace wtl {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

enum class SemiringKind { Boolean, Naturals, Tropical, Viterbi };

// A semiring element. The kind tag makes zero/one tests possible without
// consulting the semiring, which formula nodes rely on for fragment flags.
class Weight {
 public:
  struct Infinity {
    bool operator==(const Infinity&) const = default;
  };
  using Value = std::variant<bool, BigInt, Rational, Infinity>;

  Weight() : kind_(SemiringKind::Boolean), value_(false) {}
  Weight(SemiringKind kind, Value value) : kind_(kind), value_(std::move(value)) {}

  SemiringKind kind() const { return kind_; }
  const Value& value() const { return value_; }

  bool is_zero() const;
  bool is_one() const;

  bool operator==(const Weight& other) const {
    return kind_ == other.kind_ && value_ == other.value_;
  }

 private:
  SemiringKind kind_;
  Value value_;
};

class Semiring {
 public:
  static Semiring boolean() { return Semiring(SemiringKind::Boolean); }
  static Semiring naturals() { return Semiring(SemiringKind::Naturals); }
  static Semiring tropical() { return Semiring(SemiringKind::Tropical); }
  static Semiring viterbi() { return Semiring(SemiringKind::Viterbi); }
  // Accepts bool|boolean, nat|naturals, trop|tropical, viterbi.
  static Semiring by_name(std::string_view name);

  explicit Semiring(SemiringKind kind);

  SemiringKind kind() const { return kind_; }
  std::string_view name() const;

  const Weight& zero() const { return zero_; }
  const Weight& one() const { return one_; }

  Weight add(const Weight& a, const Weight& b) const;
  Weight mul(const Weight& a, const Weight& b) const;
  bool eq(const Weight& a, const Weight& b) const { return a == b; }
  bool is_zero(const Weight& a) const { return a.is_zero(); }

  Weight sum(std::span<const Weight> ws) const;
  Weight product(std::span<const Weight> ws) const;
  // n-fold sum of one.
  Weight from_count(const BigInt& n) const;

  std::string render(const Weight& w) const;
  // Literals: bool 0|1; nat decimal; tropical p/q, integer or inf;
  // viterbi p/q in [0,1].
  Weight parse(std::string_view text) const;

  bool operator==(const Semiring& other) const { return kind_ == other.kind_; }

 private:
  void check(const Weight& w) const;

  SemiringKind kind_;
  Weight zero_;
  Weight one_;
};

}  // namespace wtl
