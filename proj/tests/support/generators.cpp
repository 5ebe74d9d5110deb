#include "generators.hpp"

#include "wtl/macros.hpp"

namespace wtl::testing {

Semiring semiring_by_index(int i) {
  switch (i) {
    case 0: return Semiring::boolean();
    case 1: return Semiring::naturals();
    case 2: return Semiring::tropical();
    default: return Semiring::viterbi();
  }
}

std::vector<Semiring> all_semirings() {
  return {Semiring::boolean(), Semiring::naturals(), Semiring::tropical(), Semiring::viterbi()};
}

Weight random_weight(const Semiring& s, Rng& rng, bool allow_zero) {
  static const std::vector<std::string> boolean{"0", "1"}, nat{"0", "1", "2", "3"},
      trop{"inf", "0", "1", "2", "3"}, vit{"0", "1/4", "1/2", "3/4", "1"};
  const std::vector<std::string>* pool = &nat;
  switch (s.kind()) {
    case SemiringKind::Boolean: pool = &boolean; break;
    case SemiringKind::Naturals: pool = &nat; break;
    case SemiringKind::Tropical: pool = &trop; break;
    case SemiringKind::Viterbi: pool = &vit; break;
  }
  // Index 0 of every pool is the semiring zero.
  int i = rng.uniform(allow_zero ? 0 : 1, static_cast<int>(pool->size()) - 1);
  return s.parse((*pool)[static_cast<size_t>(i)]);
}

RankedAlphabet binary_alphabet() { return RankedAlphabet{{"sigma", 2}, {"alpha", 0}}; }
RankedAlphabet monadic_alphabet() { return RankedAlphabet{{"gamma", 1}, {"alpha", 0}}; }
RankedAlphabet mixed_alphabet() { return RankedAlphabet{{"sigma", 2}, {"gamma", 1}, {"alpha", 0}, {"beta", 0}}; }

namespace {

Tree grow(const RankedAlphabet& sigma, size_t budget, Rng& rng) {
  // A node of rank r needs at least r more nodes below it.
  std::vector<std::string> fitting;
  for (const auto& [sym, r] : sigma.entries())
    if (static_cast<size_t>(r) + 1 <= budget) fitting.push_back(sym);
  const std::string sym = rng.pick(fitting);
  const int r = *sigma.rank(sym);
  Tree t(sym);
  size_t left = budget - 1;
  for (int i = 0; i < r; ++i) {
    size_t reserve = static_cast<size_t>(r - i - 1);
    size_t share = left - reserve;
    size_t give = static_cast<size_t>(rng.uniform(1, static_cast<int>(std::max<size_t>(1, share))));
    Tree c = grow(sigma, give, rng);
    left -= tree_size(c);
    t.children.push_back(std::move(c));
  }
  return t;
}

}  // namespace

Tree random_tree(const RankedAlphabet& sigma, size_t max_size, Rng& rng) {
  return grow(sigma, static_cast<size_t>(rng.uniform(1, static_cast<int>(max_size))), rng);
}

Wta random_wta(const Semiring& s, const RankedAlphabet& sigma, int states, Rng& rng, double density) {
  Wta a(s, sigma, states, {0});
  for (const auto& [sym, r] : sigma.entries()) {
    std::vector<int> kids(static_cast<size_t>(r), 0);
    while (true) {
      for (int q = 0; q < states; ++q)
        if (rng.chance(density)) a.set_transition(sym, kids, q, random_weight(s, rng, false));
      size_t i = 0;
      while (i < kids.size() && ++kids[i] == states) kids[i++] = 0;
      if (i == kids.size()) break;
    }
  }
  // Some leaf must be accepted somewhere, or every value is zero.
  for (const auto& sym : sigma.symbols_of_rank(0))
    if (a.transitions(sym).empty()) a.set_transition(sym, {}, rng.uniform(0, states - 1), random_weight(s, rng, false));
  return a;
}

namespace {

Formula random_atom(const RankedAlphabet& sigma, const std::vector<std::string>& fo,
                    const std::vector<std::string>& so, Rng& rng, bool allow_mod) {
  const int maxrk = std::max(1, sigma.max_rank());
  while (true) {
    switch (rng.uniform(0, 5)) {
      case 0: {
        std::vector<std::string> syms;
        for (const auto& [s, r] : sigma.entries()) syms.push_back(s);
        return mso::label(rng.pick(syms), rng.pick(fo));
      }
      case 1:
      case 2: return mso::edge(rng.uniform(1, maxrk), rng.pick(fo), rng.pick(fo));
      case 3: return mso::leq(rng.pick(fo), rng.pick(fo));
      case 4:
        if (so.empty()) continue;
        return mso::in(rng.pick(fo), rng.pick(so));
      default: {
        if (!allow_mod) continue;
        int n = rng.uniform(1, 3);
        return mso::mod(rng.pick(fo), n, rng.uniform(0, n - 1));
      }
    }
  }
}

}  // namespace

Formula random_bmso(const RankedAlphabet& sigma, const std::vector<std::string>& fo,
                    const std::vector<std::string>& so, int depth, Rng& rng) {
  if (depth <= 0 || rng.chance(0.25)) {
    Formula a = random_atom(sigma, fo, so, rng, true);
    return rng.chance(0.3) ? mso::neg(a) : a;
  }
  switch (rng.uniform(0, 5)) {
    case 0: return mso::neg(random_bmso(sigma, fo, so, depth - 1, rng));
    case 1: return mso::conj(random_bmso(sigma, fo, so, depth - 1, rng), random_bmso(sigma, fo, so, depth - 1, rng));
    case 2: return macros::or_b(random_bmso(sigma, fo, so, depth - 1, rng), random_bmso(sigma, fo, so, depth - 1, rng));
    case 3: {
      std::string v = fresh_name("u");
      auto fo2 = fo;
      fo2.push_back(v);
      return macros::exists_b(v, random_bmso(sigma, fo2, so, depth - 1, rng));
    }
    case 4: {
      std::string v = fresh_name("u");
      auto fo2 = fo;
      fo2.push_back(v);
      return mso::forall(v, random_bmso(sigma, fo2, so, depth - 1, rng));
    }
    default: {
      std::string V = fresh_name("U");
      auto so2 = so;
      so2.push_back(V);
      Formula body = random_bmso(sigma, fo, so2, depth - 1, rng);
      return rng.chance(0.5) ? mso::forall(V, body) : mso::neg(mso::forall(V, mso::neg(body)));
    }
  }
}

Formula random_bfo(const RankedAlphabet& sigma, const std::vector<std::string>& fo, int depth, Rng& rng,
                   bool allow_quantifiers) {
  if (depth <= 0 || rng.chance(0.3)) {
    Formula a = random_atom(sigma, fo, {}, rng, true);
    return rng.chance(0.3) ? mso::neg(a) : a;
  }
  switch (rng.uniform(0, allow_quantifiers ? 3 : 2)) {
    case 0: return mso::neg(random_bfo(sigma, fo, depth - 1, rng, allow_quantifiers));
    case 1:
      return mso::conj(random_bfo(sigma, fo, depth - 1, rng, allow_quantifiers),
                       random_bfo(sigma, fo, depth - 1, rng, allow_quantifiers));
    case 2:
      return macros::or_b(random_bfo(sigma, fo, depth - 1, rng, allow_quantifiers),
                          random_bfo(sigma, fo, depth - 1, rng, allow_quantifiers));
    default: {
      std::string v = fresh_name("u");
      auto fo2 = fo;
      fo2.push_back(v);
      Formula body = random_bfo(sigma, fo2, depth - 1, rng, allow_quantifiers);
      return rng.chance(0.5) ? mso::forall(v, body) : macros::exists_b(v, body);
    }
  }
}

Formula random_step(const Semiring& s, const RankedAlphabet& sigma, const std::vector<std::string>& fo,
                    const std::vector<std::string>& so, int depth, Rng& rng) {
  if (depth <= 0 || rng.chance(0.2)) {
    if (rng.chance(0.4)) return mso::constant(random_weight(s, rng));
    return random_bmso(sigma, fo, so, 2, rng);
  }
  switch (rng.uniform(0, 2)) {
    case 0: return mso::disj(random_step(s, sigma, fo, so, depth - 1, rng), random_step(s, sigma, fo, so, depth - 1, rng));
    case 1: return mso::conj(random_step(s, sigma, fo, so, depth - 1, rng), random_step(s, sigma, fo, so, depth - 1, rng));
    default: return mso::neg(random_step(s, sigma, fo, so, depth - 1, rng));
  }
}

FormulaFamily random_step_family(const Semiring& s, const RankedAlphabet& sigma, int m, Rng& rng) {
  FormulaFamily fam;
  const int maxrk = std::max(1, sigma.max_rank());
  for (int k = 0; k <= m; ++k) {
    std::vector<std::string> fo{family_x()};
    for (int i = 1; i <= k; ++i) fo.push_back(family_y(i));
    std::vector<Formula> terms;
    const int nterms = rng.uniform(1, 2);
    for (int t = 0; t < nterms; ++t) {
      std::vector<Formula> guard;
      // Link each y_i to x so that tuples are mostly determined.
      for (int i = 1; i <= k; ++i) {
        if (rng.chance(0.7))
          guard.push_back(mso::edge(rng.uniform(1, maxrk), rng.chance(0.8) ? family_x() : fo[static_cast<size_t>(rng.uniform(0, i - 1))], family_y(i)));
      }
      if (rng.chance(0.6)) guard.push_back(random_bfo(sigma, fo, 1, rng, rng.chance(0.3)));
      Formula g = mso::conj_all(guard, SemiringKind::Boolean);
      terms.push_back(rng.chance(0.8) ? mso::conj(mso::constant(random_weight(s, rng, false)), g) : g);
    }
    Formula f = terms.size() == 1 ? terms[0] : mso::disj(terms[0], terms[1]);
    fam.members.push_back(f);
  }
  return fam;
}

}  // namespace wtl::testing
