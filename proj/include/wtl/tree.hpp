#pragma once

#include "wtl/semiring.hpp"

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace wtl {

struct Tree {
  std::string symbol;
  std::vector<Tree> children;

  Tree() = default;
  explicit Tree(std::string sym, std::vector<Tree> kids = {})
      : symbol(std::move(sym)), children(std::move(kids)) {}

  bool operator==(const Tree&) const = default;
  auto operator<=>(const Tree& other) const {
    if (auto c = symbol <=> other.symbol; c != 0) return c;
    return children <=> other.children;
  }
};

// A node address: the sequence of 1-based child indices from the root.
// std::vector's lexicographic order puts a prefix first, which is the
// lexicographic tree order.
class Position {
 public:
  Position() = default;
  explicit Position(std::vector<int> path) : path_(std::move(path)) {}
  Position(std::initializer_list<int> path) : path_(path) {}

  const std::vector<int>& path() const { return path_; }
  size_t length() const { return path_.size(); }
  bool empty() const { return path_.empty(); }
  int operator[](size_t i) const { return path_[i]; }

  Position child(int i) const;
  Position concat(const Position& w) const;
  Position prefix(size_t len) const;
  bool is_prefix_of(const Position& other) const;

  auto operator<=>(const Position&) const = default;
  bool operator==(const Position&) const = default;

 private:
  std::vector<int> path_;
};

class RankedAlphabet {
 public:
  RankedAlphabet() = default;
  RankedAlphabet(std::initializer_list<std::pair<const std::string, int>> entries);

  void add(const std::string& symbol, int rank);
  std::optional<int> rank(const std::string& symbol) const;
  bool contains(const std::string& symbol) const { return ranks_.count(symbol) > 0; }
  int max_rank() const;
  const std::map<std::string, int>& entries() const { return ranks_; }
  std::vector<std::string> symbols_of_rank(int r) const;
  bool empty() const { return ranks_.empty(); }

  // "sigma:2 alpha:0" (commas or whitespace separate entries).
  static RankedAlphabet parse(std::string_view text);
  std::string render() const;
  // Throws InvalidInput if a symbol is unknown or used with the wrong rank.
  void validate(const Tree& t) const;
  // Collects symbols with their observed arity; throws on inconsistent use.
  static RankedAlphabet infer(const Tree& t);

  bool operator==(const RankedAlphabet&) const = default;

 private:
  std::map<std::string, int> ranks_;
};

// Tree queries.
size_t tree_size(const Tree& t);
int tree_height(const Tree& t);  // a leaf has height 0
std::vector<Position> positions(const Tree& t);  // lexicographic order
bool has_position(const Tree& t, const Position& u);
const Tree& subtree_at(const Tree& t, const Position& u);
Tree replace_at(const Tree& t, const Position& u, const Tree& s);
const std::string& label_at(const Tree& t, const Position& u);
bool lex_leq(const Position& u, const Position& v);

Tree parse_tree(std::string_view text);
std::string render_tree(const Tree& t);
Position parse_position(std::string_view text);  // "1.2.1" or "e"
std::string render_position(const Position& u);

// Every tree over the alphabet with at most max_size nodes, sorted by size
// and then by rendering.
std::vector<Tree> enumerate_trees(const RankedAlphabet& sigma, size_t max_size);

// Preorder-indexed view of a tree. Preorder index order coincides with the
// lexicographic order of positions.
class IndexedTree {
 public:
  explicit IndexedTree(const Tree& t);

  size_t size() const { return labels_.size(); }
  const Tree& tree() const { return tree_; }
  const std::string& label(size_t v) const { return labels_[v]; }
  int parent(size_t v) const { return parent_[v]; }    // -1 for the root
  int child_index(size_t v) const { return cidx_[v]; }  // 0 for the root
  int depth(size_t v) const { return depth_[v]; }
  int height(size_t v) const { return height_[v]; }
  // Descendants of v (v included) are exactly the indices in [v, end(v)).
  size_t end(size_t v) const { return end_[v]; }
  const std::vector<int>& children(size_t v) const { return children_[v]; }
  const Position& position(size_t v) const { return positions_[v]; }
  std::optional<size_t> index_of(const Position& u) const;
  bool is_ancestor_or_self(size_t u, size_t v) const { return u <= v && v < end_[u]; }
  // u.w as an index, if that node exists.
  std::optional<size_t> follow(size_t u, const std::vector<int>& w) const;
  // The ancestor of v that is k levels up (k <= depth(v)).
  size_t ancestor(size_t v, int k) const;

 private:
  Tree tree_;
  std::vector<std::string> labels_;
  std::vector<int> parent_, cidx_, depth_, height_;
  std::vector<size_t> end_;
  std::vector<std::vector<int>> children_;
  std::vector<Position> positions_;
};

// A tree homomorphism maps each symbol of rank k to a tree over the target
// alphabet in which the variables z1..zk occur exactly once, in order.
class TreeHomomorphism {
 public:
  TreeHomomorphism(RankedAlphabet source, RankedAlphabet target);
  void set_image(const std::string& symbol, Tree image);
  const Tree& image(const std::string& symbol) const;
  const RankedAlphabet& source() const { return source_; }
  const RankedAlphabet& target() const { return target_; }
  Tree apply(const Tree& t) const;

 private:
  RankedAlphabet source_, target_;
  std::map<std::string, Tree> images_;
};

// |h^{-1}(t)| by brute-force enumeration of source trees no larger than t,
// embedded into the semiring by repeated addition of one.
Weight hom_preimage_count(const TreeHomomorphism& h, const Tree& t, const Semiring& s);

// Names z1, z2, ... denote slice variables.
std::string variable_name(int i);
// Returns i for "z<i>", 0 otherwise.
int variable_index(std::string_view symbol);

}  // namespace wtl
