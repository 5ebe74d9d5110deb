#pragma once

#include "wtl/formula.hpp"
#include "wtl/tree.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace wtl {

// Variable environment. First-order values are preorder indices, second-order
// values are bitmasks over preorder indices. Names are held by pointer, so the
// referenced strings must outlive the binding.
class Env {
 public:
  void push(const std::string& name, uint32_t value) { items_.push_back({&name, value}); }
  void pop() { items_.pop_back(); }
  void set_top(uint32_t value) { items_.back().value = value; }
  std::optional<uint32_t> find(const std::string& name) const {
    for (auto it = items_.rbegin(); it != items_.rend(); ++it)
      if (*it->name == name) return it->value;
    return std::nullopt;
  }
  size_t size() const { return items_.size(); }

 private:
  struct Item {
    const std::string* name;
    uint32_t value;
  };
  std::vector<Item> items_;
};

namespace detail {

// Negation normal form with flattened junctions and merged quantifier
// blocks. Shapes are interned up to renaming of variables: a shape's slots
// are its free variables in order of first occurrence, followed by the
// variables it binds.
struct Shape {
  enum class Kind : uint8_t { True, False, Label, Edge, Leq, In, Mod, And, Or, Exists, Forall };
  Kind kind = Kind::True;
  bool negated = false;  // atoms only
  int p0 = 0, p1 = 0;    // label symbol id / edge index / mod n, m
  std::vector<int> args;  // atom arguments as slots
  int nfree = 0;
  int nslots = 0;
  std::vector<uint8_t> slot_is_so;
  struct Item {
    int shape;
    std::vector<int> map;  // child slot -> slot of this shape
  };
  std::vector<Item> items;
  // Quantifier search plan.
  std::vector<int> pre;
  std::vector<int> order;
  std::vector<std::vector<int>> after;
};

}  // namespace detail

// Compiles BMSO formulas. A program can be shared by contexts over
// different trees.
class BoolProgram {
 public:
  struct Ref {
    int shape = 0;
    std::vector<std::string> names;  // variable names bound to the free slots
  };

  // Requires f to lie in BMSO.
  const Ref& compile(const Formula& f);
  const detail::Shape& shape(int id) const { return shapes_[static_cast<size_t>(id)]; }
  size_t shape_count() const { return shapes_.size(); }
  const std::vector<std::string>& symbols() const { return symbols_; }

 private:
  struct Item {
    int shape;
    std::vector<std::string> names;
  };

  const Ref& compile_pol(const Formula& f, bool pol);
  Ref atom(detail::Shape::Kind k, bool negated, int p0, int p1,
           const std::vector<std::string>& vars, const std::vector<uint8_t>& so);
  Ref junction(detail::Shape::Kind k, std::vector<Item> items);
  Ref quantifier(detail::Shape::Kind k, const std::string& var, bool so, const Ref& body);
  Ref constant(bool value);
  Ref finish(detail::Shape s, std::vector<Item> items, const std::vector<std::string>& free_names,
             const std::vector<std::string>& bound_names);
  void plan(detail::Shape& s);
  int intern(detail::Shape s);
  int symbol_id(const std::string& s);

  std::vector<detail::Shape> shapes_;
  std::unordered_map<std::string, int> index_;
  std::vector<std::string> symbols_;
  std::unordered_map<std::string, int> symbol_index_;
  std::unordered_map<const FormulaNode*, std::pair<Formula, Ref>> cache_[2];
  uint64_t internal_counter_ = 0;
};

// Evaluates compiled formulas on one tree with memoisation.
class BoolContext {
 public:
  BoolContext(std::shared_ptr<BoolProgram> program, const IndexedTree& tree, size_t so_cap);

  // f must lie in BMSO and its free variables must be bound in env.
  bool holds(const Formula& f, const Env& env);
  bool eval(int shape, const uint32_t* vals);
  size_t memo_entries() const { return memo_.size(); }
  BoolProgram& program() { return *program_; }

 private:
  bool eval_atom(const detail::Shape& s, const uint32_t* vals);
  bool search(const detail::Shape& s, uint32_t* vals, size_t step, bool exists);
  bool item_value(const detail::Shape& s, int item, const uint32_t* vals);
  uint32_t domain(const detail::Shape& s, int slot) const;

  class Memo {
   public:
    const uint8_t* find(int shape, const uint32_t* vals, int n, uint64_t h) const;
    void insert(int shape, const uint32_t* vals, int n, uint64_t h, bool value);
    size_t size() const { return count_; }

   private:
    struct Slot {
      uint64_t hash = 0;
      uint32_t offset = 0;
      int32_t shape = -1;
      uint8_t len = 0;
      uint8_t value = 0;
    };
    void grow();
    std::vector<Slot> slots_ = std::vector<Slot>(1024);
    std::vector<uint32_t> arena_;
    size_t count_ = 0;
  };

  std::shared_ptr<BoolProgram> program_;
  const IndexedTree& tree_;
  size_t so_cap_;
  std::vector<int> label_id_;    // per position
  std::vector<int> symbol_map_;  // program symbol id -> tree label id or -1
  std::vector<std::string> tree_labels_;
  Memo memo_;
};

}  // namespace wtl
