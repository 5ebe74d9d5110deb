#include "wtl/slicing.hpp"

#include "wtl/errors.hpp"

#include <algorithm>
#include <climits>
#include <functional>
#include <map>

namespace wtl {

namespace {

const char* const kHole = "\x01";

void require_n(int n) {
  if (n < 1) throw InvalidInput("slice depth n must be at least 1");
}

}  // namespace

HeadCut head_cut(const Tree& xi, const Position& u, int n) {
  require_n(n);
  const Tree& top = subtree_at(xi, u);
  HeadCut out;
  std::vector<int> path;
  std::function<Tree(const Tree&, int)> go = [&](const Tree& s, int d) -> Tree {
    if (d == n && tree_height(s) >= n) {
      out.cut.push_back(u.concat(Position(path)));
      return Tree(variable_name(static_cast<int>(out.cut.size())));
    }
    if (d >= n) return s;
    Tree t(s.symbol);
    for (size_t i = 0; i < s.children.size(); ++i) {
      path.push_back(static_cast<int>(i) + 1);
      t.children.push_back(go(s.children[i], d + 1));
      path.pop_back();
    }
    return t;
  };
  out.head.body = go(top, 0);
  out.head.k = static_cast<int>(out.cut.size());
  return out;
}

size_t Decomposition::count() const {
  size_t c = 1;
  for (const auto& ch : children) c += ch.count();
  return c;
}

Decomposition decompose(const Tree& xi, int n) {
  std::function<Decomposition(const Position&)> go = [&](const Position& u) {
    HeadCut hc = head_cut(xi, u, n);
    Decomposition d{hc.head, u, {}};
    for (const auto& v : hc.cut) d.children.push_back(go(v));
    return d;
  };
  return go(Position());
}

Tree recompose(const Decomposition& d) {
  std::vector<Tree> kids;
  for (const auto& c : d.children) kids.push_back(recompose(c));
  std::function<Tree(const Tree&)> go = [&](const Tree& s) -> Tree {
    if (int i = variable_index(s.symbol); i > 0 && s.children.empty()) {
      if (static_cast<size_t>(i) > kids.size())
        throw InvalidInput("decomposition has fewer children than slice variables");
      return kids[static_cast<size_t>(i) - 1];
    }
    Tree t(s.symbol);
    for (const auto& c : s.children) t.children.push_back(go(c));
    return t;
  };
  return go(d.head.body);
}

std::vector<Position> variable_positions(const Tree& body) {
  std::vector<std::pair<int, Position>> found;
  std::vector<int> path;
  std::function<void(const Tree&)> go = [&](const Tree& s) {
    if (int i = variable_index(s.symbol); i > 0 && s.children.empty()) {
      found.emplace_back(i, Position(path));
      return;
    }
    for (size_t c = 0; c < s.children.size(); ++c) {
      path.push_back(static_cast<int>(c) + 1);
      go(s.children[c]);
      path.pop_back();
    }
  };
  go(body);
  std::sort(found.begin(), found.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<Position> out;
  for (auto& f : found) out.push_back(std::move(f.second));
  return out;
}

bool in_slice_class(const Tree& body, int n, int k, const RankedAlphabet& sigma) {
  if (n < 1 || k < 0) return false;
  int next = 1;
  bool ok = true;
  std::function<void(const Tree&, int)> go = [&](const Tree& s, int d) {
    if (!ok) return;
    if (d >= 2 * n) {
      ok = false;
      return;
    }
    if (int i = variable_index(s.symbol); i > 0 && !sigma.contains(s.symbol)) {
      if (!s.children.empty() || d != n || i != next) ok = false;
      ++next;
      return;
    }
    auto r = sigma.rank(s.symbol);
    if (!r || *r != static_cast<int>(s.children.size())) {
      ok = false;
      return;
    }
    for (const auto& c : s.children) go(c, d + 1);
  };
  go(body, 0);
  return ok && next - 1 == k;
}

int max_slice_arity(const RankedAlphabet& sigma, int n) {
  require_n(n);
  long long m = sigma.max_rank(), r = 1;
  if (m == 0) return 0;
  for (int i = 0; i < n; ++i) {
    r *= m;
    if (r > INT_MAX) return INT_MAX;
  }
  return static_cast<int>(r);
}

namespace {

size_t sat_add(size_t a, size_t b, size_t cap) { return std::min(cap + 1, a + b); }
size_t sat_mul(size_t a, size_t b, size_t cap) {
  if (a == 0 || b == 0) return 0;
  if (a > (cap + 1) / b + 1) return cap + 1;
  return std::min(cap + 1, a * b);
}

// counts[d][c]: trees rooted at relative depth d with c variables, c <= k.
std::vector<std::vector<size_t>> slice_counts(const RankedAlphabet& sigma, int n, int k,
                                              size_t cap) {
  std::vector<std::vector<size_t>> counts(static_cast<size_t>(2 * n),
                                          std::vector<size_t>(static_cast<size_t>(k) + 1, 0));
  for (int d = 2 * n - 1; d >= 0; --d) {
    auto& row = counts[static_cast<size_t>(d)];
    if (d == n && k >= 1) row[1] = sat_add(row[1], 1, cap);
    for (const auto& [sym, rank] : sigma.entries()) {
      if (rank == 0) {
        row[0] = sat_add(row[0], 1, cap);
        continue;
      }
      if (d + 1 >= 2 * n) continue;
      const auto& child = counts[static_cast<size_t>(d) + 1];
      std::vector<size_t> acc(static_cast<size_t>(k) + 1, 0);
      acc[0] = 1;
      for (int i = 0; i < rank; ++i) {
        std::vector<size_t> nxt(static_cast<size_t>(k) + 1, 0);
        for (int a = 0; a <= k; ++a)
          for (int b = 0; a + b <= k; ++b)
            nxt[static_cast<size_t>(a + b)] =
                sat_add(nxt[static_cast<size_t>(a + b)],
                        sat_mul(acc[static_cast<size_t>(a)], child[static_cast<size_t>(b)], cap),
                        cap);
        acc = std::move(nxt);
      }
      for (int c = 0; c <= k; ++c)
        row[static_cast<size_t>(c)] = sat_add(row[static_cast<size_t>(c)], acc[static_cast<size_t>(c)], cap);
    }
  }
  return counts;
}

void number_holes(Tree& t, int& next) {
  if (t.symbol == kHole) {
    t.symbol = variable_name(++next);
    return;
  }
  for (auto& c : t.children) number_holes(c, next);
}

}  // namespace

size_t count_slices(const RankedAlphabet& sigma, int n, int k, size_t cap) {
  require_n(n);
  if (k < 0) return 0;
  return slice_counts(sigma, n, k, cap)[0][static_cast<size_t>(k)];
}

std::vector<Slice> enumerate_slices(const RankedAlphabet& sigma, int n, int k, size_t cap) {
  require_n(n);
  if (k < 0) return {};
  auto counts = slice_counts(sigma, n, k, cap);
  if (counts[0][static_cast<size_t>(k)] > cap)
    throw ExplosionGuard("more than " + std::to_string(cap) + " slices in C^" + std::to_string(n) +
                         "_" + std::to_string(k));
  size_t inner = 0;
  for (const auto& row : counts)
    for (size_t c : row) inner = sat_add(inner, c, cap * 16);
  if (inner > cap * 16)
    throw ExplosionGuard("slice enumeration for n=" + std::to_string(n) + " exceeds the cap");

  // gen[d][c]: trees at relative depth d with c holes
  std::vector<std::vector<std::vector<Tree>>> gen(
      static_cast<size_t>(2 * n), std::vector<std::vector<Tree>>(static_cast<size_t>(k) + 1));
  for (int d = 2 * n - 1; d >= 0; --d) {
    auto& row = gen[static_cast<size_t>(d)];
    if (d == n && k >= 1) row[1].emplace_back(kHole);
    for (const auto& [sym, rank] : sigma.entries()) {
      if (rank == 0) {
        row[0].emplace_back(sym);
        continue;
      }
      if (d + 1 >= 2 * n) continue;
      const auto& child = gen[static_cast<size_t>(d) + 1];
      std::vector<Tree> kids(static_cast<size_t>(rank));
      std::function<void(int, int)> go = [&](int i, int used) {
        if (i == rank) {
          row[static_cast<size_t>(used)].emplace_back(sym, kids);
          return;
        }
        for (int c = 0; used + c <= k; ++c)
          for (const auto& t : child[static_cast<size_t>(c)]) {
            kids[static_cast<size_t>(i)] = t;
            go(i + 1, used + c);
          }
      };
      go(0, 0);
    }
  }
  std::vector<Slice> out;
  for (auto& t : gen[0][static_cast<size_t>(k)]) {
    int next = 0;
    number_holes(t, next);
    out.push_back(Slice{std::move(t), k});
  }
  std::stable_sort(out.begin(), out.end(), [](const Slice& a, const Slice& b) {
    size_t sa = tree_size(a.body), sb = tree_size(b.body);
    if (sa != sb) return sa < sb;
    return render_tree(a.body) < render_tree(b.body);
  });
  return out;
}

}  // namespace wtl
