#include "wtl/wta2tc.hpp"

#include "wtl/errors.hpp"
#include "wtl/macros.hpp"

#include <cmath>

namespace wtl {

namespace {

std::vector<int> decode_states(size_t code, int k, int n) {
  std::vector<int> qs(static_cast<size_t>(k));
  for (int i = k; i-- > 0;) {
    qs[static_cast<size_t>(i)] = static_cast<int>(code % static_cast<size_t>(n));
    code /= static_cast<size_t>(n);
  }
  return qs;
}

size_t pow_size(size_t b, int e) {
  size_t r = 1;
  while (e-- > 0) r *= b;
  return r;
}

}  // namespace

Position base_position(const Position& v, int n) {
  return v.prefix(v.length() / static_cast<size_t>(n) * static_cast<size_t>(n));
}

int encoded_state(const Position& v, int n) { return static_cast<int>(v.length() % static_cast<size_t>(n)); }

PhiConstruction build_phi(const Wta& a, size_t slice_cap) {
  if (!a.is_normalized()) throw NotNormalized("build_phi needs an automaton whose only final state is 0");
  const Semiring& s = a.semiring();
  const int n = a.state_count();
  const RankedAlphabet& sigma = a.alphabet();
  const int maxrk = sigma.max_rank();
  const int kmax = max_slice_arity(sigma, n);

  PhiConstruction out{a, n, {}, {}};
  for (int k = 0; k <= kmax; ++k) {
    std::vector<SliceRow> rows;
    const size_t combos = pow_size(static_cast<size_t>(n), k);
    for (auto& sl : enumerate_slices(sigma, n, k, slice_cap)) {
      SliceRow row{std::move(sl), {}};
      for (size_t c = 0; c < combos; ++c) row.weights.push_back(run(a, row.slice.body, decode_states(c, k, n)));
      rows.push_back(std::move(row));
    }
    out.table.push_back(std::move(rows));
  }

  const std::string& x = family_x();
  for (int k = 0; k <= kmax; ++k) {
    // One set of bound names per member, so the shared parts of the
    // disjuncts are literally the same subformulas.
    const std::string z = fresh_name("z");
    macros::Names zs;
    for (int i = 1; i <= k; ++i) zs.push_back(fresh_name("z"));
    macros::Names block{z};
    block.insert(block.end(), zs.begin(), zs.end());

    std::vector<Formula> common{macros::base(z, x, n, maxrk), macros::form_cut(n, z, zs, maxrk)};
    for (int i = 0; i < k; ++i)
      common.push_back(macros::on_lmp(n - 1, zs[static_cast<size_t>(i)], family_y(i + 1), maxrk));
    std::vector<Formula> desc_x(static_cast<size_t>(n));
    for (int q = 0; q < n; ++q) desc_x[static_cast<size_t>(q)] = macros::desc_exact(z, x, q, maxrk);
    std::vector<std::vector<Formula>> desc_y(static_cast<size_t>(k), std::vector<Formula>(static_cast<size_t>(n)));
    for (int i = 0; i < k; ++i)
      for (int q = 0; q < n; ++q)
        desc_y[static_cast<size_t>(i)][static_cast<size_t>(q)] =
            macros::desc_exact(zs[static_cast<size_t>(i)], family_y(i + 1), q, maxrk);
    const Formula shared = mso::conj_all(common);

    std::vector<Formula> disjuncts;
    for (const auto& row : out.table[static_cast<size_t>(k)]) {
      const Formula chk = macros::check(row.slice.body, z, zs, maxrk);
      for (size_t c = 0; c < row.weights.size(); ++c) {
        auto qs = decode_states(c, k, n);
        for (int q = 0; q < n; ++q) {
          const Weight& w = row.weights[c][static_cast<size_t>(q)];
          if (s.is_zero(w)) continue;  // a zero-weighted disjunct adds nothing
          std::vector<Formula> theta{shared, desc_x[static_cast<size_t>(q)]};
          for (int i = 0; i < k; ++i)
            theta.push_back(desc_y[static_cast<size_t>(i)][static_cast<size_t>(qs[static_cast<size_t>(i)])]);
          theta.push_back(chk);
          disjuncts.push_back(mso::conj(macros::exists_b(block, mso::conj_all(theta)), mso::constant(w)));
        }
      }
    }
    out.family.members.push_back(mso::disj_all(disjuncts, s.kind()));
  }
  return out;
}

Weight phi_semantics_direct(const Wta& a, const Tree& xi, int k, const Position& v,
                            const std::vector<Position>& vs) {
  const Semiring& s = a.semiring();
  const int n = a.state_count();
  if (static_cast<int>(vs.size()) != k) throw InvalidInput("phi_semantics_direct needs k positions");
  const Position bv = base_position(v, n);
  HeadCut hc = head_cut(xi, bv, n);
  if (static_cast<int>(hc.cut.size()) != k) return s.zero();
  std::vector<int> ctx;
  for (int i = 0; i < k; ++i) {
    const Position& vi = vs[static_cast<size_t>(i)];
    const Position& ui = hc.cut[static_cast<size_t>(i)];
    // v_i must lie on the leftmost path of length n-1 below u_i.
    if (!ui.is_prefix_of(vi) || vi.length() - ui.length() > static_cast<size_t>(n - 1)) return s.zero();
    for (size_t j = ui.length(); j < vi.length(); ++j)
      if (vi[j] != 1) return s.zero();
    ctx.push_back(encoded_state(vi, n));
  }
  return run(a, hc.head.body, ctx)[static_cast<size_t>(encoded_state(v, n))];
}

BbtcReport check_bbtc(const Wta& a, const std::vector<Tree>& trees, const TcOptions& opts, size_t slice_cap) {
  BbtcReport rep;
  Wta norm = normalize_final(a);
  rep.renumbered = !a.is_normalized();
  rep.n = norm.state_count();
  if (rep.n >= 3 && norm.alphabet().max_rank() >= 2)
    throw ExplosionGuard("check_bbtc refuses " + std::to_string(rep.n) +
                         " states over a non-monadic alphabet (slice tables grow doubly exponentially); "
                         "use at most 2 states or a monadic alphabet");
  PhiConstruction pc = build_phi(norm, slice_cap);
  const Progress psi = Progress::bounded(2 * rep.n);
  const Semiring& s = norm.semiring();
  TcOptions o = opts;
  if (!o.program) o.program = std::make_shared<BoolProgram>();
  for (const auto& t : trees) {
    Weight want = recognize(a, t);
    Weight got = eval_tc(s, psi, pc.family, t, {}, o);
    ++rep.checked;
    if (!(want == got)) {
      rep.pass = false;
      rep.counterexample = t;
      rep.expected = want;
      rep.actual = got;
      break;
    }
  }
  return rep;
}

}  // namespace wtl
