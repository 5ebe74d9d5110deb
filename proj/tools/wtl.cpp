// Command-line front end for the weighted tree logic library.

#include "wtl/ea.hpp"
#include "wtl/errors.hpp"
#include "wtl/evaluate.hpp"
#include "wtl/macros.hpp"
#include "wtl/slicing.hpp"
#include "wtl/tc.hpp"
#include "wtl/wta.hpp"
#include "wtl/wta2tc.hpp"

#include "CLI11.hpp"

#include <filesystem>
#include <functional>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

namespace {

using namespace wtl;

constexpr int kOk = 0, kCheckFailed = 1, kInputError = 2;

struct Globals {
  std::string semiring;
  uint64_t seed = 20240601;
  size_t cap_so = 20;
  size_t cap_slices = 10000;
  std::string format = "human";

  bool tsv() const { return format == "tsv"; }
  EvalOptions eval() const {
    EvalOptions o;
    o.so_cap = cap_so;
    return o;
  }
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot read '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidInput("cannot write '" + path + "'");
  out << text;
}

// A tree argument is either a file holding the tree or the tree itself.
Tree tree_arg(const std::string& arg) {
  std::error_code ec;
  if (std::filesystem::is_regular_file(arg, ec)) return parse_tree(read_file(arg));
  return parse_tree(arg);
}

// Text argument given inline or, with a leading '@' or an existing path, from a file.
std::string text_arg(const std::string& arg) {
  if (!arg.empty() && arg[0] == '@') return read_file(arg.substr(1));
  std::error_code ec;
  if (std::filesystem::is_regular_file(arg, ec)) return read_file(arg);
  return arg;
}

Semiring pick_semiring(const Globals& g, const std::optional<Semiring>& declared) {
  if (!g.semiring.empty()) {
    Semiring flag = Semiring::by_name(g.semiring);
    if (declared && declared->kind() != flag.kind())
      throw InvalidInput("--semiring " + g.semiring + " conflicts with the file's semiring " +
                         std::string(declared->name()));
    return flag;
  }
  return declared ? *declared : Semiring::naturals();
}

Semiring flag_semiring(const Globals& g) {
  return g.semiring.empty() ? Semiring::naturals() : Semiring::by_name(g.semiring);
}

Position position_arg(const std::string& s) { return parse_position(s); }

// Random tree with at most max_size nodes; leaves are forced once the
// budget runs out.
Tree random_tree(const RankedAlphabet& sigma, size_t max_size, std::mt19937_64& rng) {
  std::vector<std::pair<std::string, int>> leaves, inner;
  for (const auto& [sym, rk] : sigma.entries()) (rk == 0 ? leaves : inner).emplace_back(sym, rk);
  if (leaves.empty()) throw InvalidInput("the alphabet has no constant symbol");
  size_t budget = max_size;
  std::function<Tree()> grow = [&]() -> Tree {
    --budget;
    std::vector<std::pair<std::string, int>> fit;
    for (const auto& s : inner)
      if (static_cast<size_t>(s.second) <= budget) fit.push_back(s);
    if (!fit.empty() && std::bernoulli_distribution(0.55)(rng)) {
      const auto& [sym, rk] = fit[std::uniform_int_distribution<size_t>(0, fit.size() - 1)(rng)];
      budget -= static_cast<size_t>(rk);  // reserve one node per child
      std::vector<Tree> kids;
      for (int i = 0; i < rk; ++i) {
        ++budget;
        kids.push_back(grow());
      }
      return Tree(sym, std::move(kids));
    }
    return Tree(leaves[std::uniform_int_distribution<size_t>(0, leaves.size() - 1)(rng)].first);
  };
  return grow();
}

// "exhaustive:N" or "random:COUNT:N".
std::vector<Tree> tree_corpus(const std::string& spec, const RankedAlphabet& sigma, uint64_t seed,
                              std::ostream& note) {
  auto num = [&](const std::string& s) -> size_t {
    if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
      throw InvalidInput("bad number '" + s + "' in --trees " + spec);
    return std::stoul(s);
  };
  if (spec.rfind("exhaustive:", 0) == 0) return enumerate_trees(sigma, num(spec.substr(11)));
  if (spec.rfind("random:", 0) == 0) {
    const std::string rest = spec.substr(7);
    const auto colon = rest.find(':');
    if (colon == std::string::npos) throw InvalidInput("--trees random:COUNT:MAXSIZE expected");
    const size_t count = num(rest.substr(0, colon)), max_size = num(rest.substr(colon + 1));
    if (max_size == 0) throw InvalidInput("MAXSIZE must be positive");
    std::mt19937_64 rng(seed);
    std::vector<Tree> out;
    for (size_t i = 0; i < count; ++i) out.push_back(random_tree(sigma, max_size, rng));
    note << "seed " << seed << "\n";
    return out;
  }
  throw InvalidInput("--trees expects exhaustive:MAXSIZE or random:COUNT:MAXSIZE");
}

// name=pos for first-order variables, NAME=pos,pos,... for sets ("" is empty).
Assignment parse_assignments(const std::vector<std::string>& items) {
  Assignment a;
  for (const auto& it : items) {
    const auto eq = it.find('=');
    if (eq == std::string::npos || eq == 0) throw InvalidInput("--assign expects name=value, got '" + it + "'");
    const std::string name = it.substr(0, eq), value = it.substr(eq + 1);
    if (!is_valid_variable(name)) throw InvalidInput("bad variable name '" + name + "'");
    if (is_so_variable(name)) {
      std::set<Position> set;
      std::stringstream ss(value);
      std::string part;
      while (std::getline(ss, part, ','))
        if (!part.empty()) set.insert(parse_position(part));
      a.so[name] = set;
    } else {
      a.fo[name] = parse_position(value);
    }
  }
  return a;
}

void result_line(std::ostream& out, bool pass, size_t checked) {
  out << "RESULT " << (pass ? "pass" : "fail") << " checked=" << checked << "\n";
}

void render_decomposition(const Decomposition& d, int depth, bool tsv, std::ostream& out) {
  std::string cut;
  for (const auto& c : d.children) cut += (cut.empty() ? "" : ",") + render_position(c.at);
  if (tsv) {
    out << render_position(d.at) << "\t" << render_tree(d.head.body) << "\t" << d.head.k << "\t" << cut << "\n";
  } else {
    out << std::string(static_cast<size_t>(depth) * 2, ' ') << "[" << render_position(d.at) << "] "
        << render_tree(d.head.body);
    if (!cut.empty()) out << "  cut " << cut;
    out << "\n";
  }
  for (const auto& c : d.children) render_decomposition(c, depth + 1, tsv, out);
}

}  // namespace

int main(int argc, char** argv) {
  Globals g;
  CLI::App app{"Weighted tree automata and weighted MSO transitive closure toolkit"};
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default();
  app.add_option("--semiring", g.semiring, "bool | nat | trop | viterbi (files may declare their own)");
  app.add_option("--seed", g.seed, "seed for random tree corpora");
  app.add_option("--cap-so", g.cap_so, "largest tree on which set quantifiers are expanded")->check(CLI::PositiveNumber);
  app.add_option("--cap-slices", g.cap_slices, "largest slice class build-phi will enumerate")->check(CLI::PositiveNumber);
  app.add_option("--format", g.format, "output format")->check(CLI::IsMember({"human", "tsv"}));

  std::ostringstream out;  // flushed only on success or check failure
  int status = kOk;
  std::function<void()> action;

  // eval-wta
  std::string wta_file, tree_text;
  auto* eval_wta = app.add_subcommand("eval-wta", "weight of a tree under an automaton");
  eval_wta->add_option("automaton", wta_file, "automaton file")->required();
  eval_wta->add_option("tree", tree_text, "tree or tree file")->required();
  bool show_states = false;
  eval_wta->add_flag("--states", show_states, "print the full state vector");
  eval_wta->callback([&] {
    action = [&] {
      Wta a = parse_wta(read_file(wta_file));
      if (!g.semiring.empty()) pick_semiring(g, a.semiring());
      Tree t = tree_arg(tree_text);
      a.alphabet().validate(t);
      if (show_states) {
        auto v = run(a, t);
        for (size_t q = 0; q < v.size(); ++q)
          out << (g.tsv() ? "" : "q") << q << (g.tsv() ? "\t" : " ") << a.semiring().render(v[q]) << "\n";
      } else {
        out << a.semiring().render(recognize(a, t)) << "\n";
      }
    };
  });

  // eval-formula
  std::string formula_text;
  std::vector<std::string> assigns;
  auto* eval_formula = app.add_subcommand("eval-formula", "value of a formula on a tree under an assignment");
  eval_formula->add_option("formula", formula_text, "s-expression, file, or @file")->required();
  eval_formula->add_option("tree", tree_text, "tree or tree file")->required();
  eval_formula->add_option("--assign,-a", assigns, "x=1.2 or X=e,1,2.1");
  eval_formula->callback([&] {
    action = [&] {
      Semiring s = flag_semiring(g);
      Formula f = parse_formula(text_arg(formula_text), s);
      Tree t = tree_arg(tree_text);
      Assignment a = parse_assignments(assigns);
      for (const auto& v : f->free_vars())
        if (!a.fo.count(v) && !a.so.count(v)) throw UnboundVariable("free variable '" + v + "' needs --assign");
      for (const auto& [n, p] : a.fo)
        if (!has_position(t, p)) throw PositionOutOfRange(n + " = " + render_position(p) + " is not in the tree");
      for (const auto& [n, ps] : a.so)
        for (const auto& p : ps)
          if (!has_position(t, p)) throw PositionOutOfRange(render_position(p) + " in " + n + " is not in the tree");
      out << s.render(evaluate(s, f, t, a, g.eval())) << "\n";
    };
  });

  // slice
  int slice_n = 1;
  auto* slice = app.add_subcommand("slice", "depth-n slice decomposition of a tree");
  slice->add_option("--n", slice_n, "slice depth")->required()->check(CLI::PositiveNumber);
  slice->add_option("tree", tree_text, "tree or tree file")->required();
  slice->callback([&] {
    action = [&] {
      Decomposition d = decompose(tree_arg(tree_text), slice_n);
      render_decomposition(d, 0, g.tsv(), out);
      if (!g.tsv()) out << d.count() << " slices\n";
    };
  });

  // macro
  std::string macro_name, alphabet_text = "sigma:2 alpha:0";
  std::vector<std::string> macro_params;
  bool macro_list = false;
  auto* macro = app.add_subcommand("macro", "expand a catalog macro to a core formula");
  macro->add_option("name", macro_name, "macro name");
  macro->add_option("params", macro_params, "macro parameters");
  macro->add_option("--alphabet", alphabet_text, "ranked alphabet, e.g. \"sigma:2 alpha:0\"");
  macro->add_flag("--list", macro_list, "list the catalog");
  macro->callback([&] {
    action = [&] {
      if (macro_list) {
        for (const auto& m : macros::catalog())
          out << m.name << (g.tsv() ? "\t" : " ") << m.params_help << (g.tsv() ? "\t" : "  ") << m.summary << "\n";
        return;
      }
      if (macro_name.empty()) throw InvalidInput("macro needs a NAME (or --list)");
      const RankedAlphabet sigma = RankedAlphabet::parse(alphabet_text);
      out << to_sexpr(macros::build(macro_name, sigma, macro_params)) << "\n";
    };
  });

  // build-phi
  std::string out_file;
  auto* build_phi_cmd = app.add_subcommand("build-phi", "formula family whose bounded closure equals an automaton");
  build_phi_cmd->add_option("automaton", wta_file, "automaton file")->required();
  build_phi_cmd->add_option("-o,--output", out_file, "family file to write (default stdout)");
  build_phi_cmd->callback([&] {
    action = [&] {
      Wta a = parse_wta(read_file(wta_file));
      if (!g.semiring.empty()) pick_semiring(g, a.semiring());
      Wta norm = normalize_final(a);
      PhiConstruction pc = build_phi(norm, g.cap_slices);
      Semiring s = norm.semiring();
      RankedAlphabet sigma = norm.alphabet();
      std::string text = "# bounded progress: bounded:" + std::to_string(2 * pc.n) + "\n" +
                         render_family(pc.family, &s, &sigma);
      if (out_file.empty()) {
        out << text;
      } else {
        write_file(out_file, text);
        out << "wrote " << out_file << ": m=" << pc.family.m() << " n=" << pc.n
            << " progress=bounded:" << 2 * pc.n << "\n";
      }
    };
  });

  // eval-tc
  std::string progress_text = "desc+", family_file, at_text = "e";
  bool show_levels = false;
  auto* eval_tc_cmd = app.add_subcommand("eval-tc", "transitive closure value of a family on a tree");
  eval_tc_cmd->add_option("--progress", progress_text, "desc+ | bounded:N");
  eval_tc_cmd->add_option("--family", family_file, "family file")->required();
  eval_tc_cmd->add_option("--tree", tree_text, "tree or tree file")->required();
  eval_tc_cmd->add_option("--at", at_text, "position of x");
  eval_tc_cmd->add_flag("--levels", show_levels, "print the non-zero levels as well");
  eval_tc_cmd->callback([&] {
    action = [&] {
      FamilyFile ff = parse_family(read_file(family_file), flag_semiring(g));
      Semiring s = pick_semiring(g, ff.semiring);
      Progress psi = Progress::parse(progress_text);
      Tree t = tree_arg(tree_text);
      if (ff.alphabet) ff.alphabet->validate(t);
      TcOptions o;
      o.eval = g.eval();
      TcTable tab = tc_levels(s, psi, ff.family, t, o);
      IndexedTree it(t);
      auto v = it.index_of(position_arg(at_text));
      if (!v) throw PositionOutOfRange("position " + at_text + " is not in the tree");
      out << s.render(tab.total(*v)) << "\n";
      if (show_levels)
        for (size_t l = 1; l <= tab.nodes(); ++l)
          if (!tab.level(*v, l).is_zero())
            out << (g.tsv() ? "" : "level ") << l << (g.tsv() ? "\t" : " ") << s.render(tab.level(*v, l)) << "\n";
    };
  });

  // build-ea
  bool non_strict = false;
  auto* build_ea = app.add_subcommand("build-ea", "exists-forall formula equal to the desc+ closure of a family");
  build_ea->add_option("family", family_file, "family file")->required();
  build_ea->add_option("-o,--output", out_file, "formula file to write (default stdout)");
  build_ea->add_option("--alphabet", alphabet_text, "alphabet when the family file has none");
  build_ea->add_flag("--non-strict", non_strict, "accept families that are not step families");
  build_ea->callback([&] {
    action = [&] {
      FamilyFile ff = parse_family(read_file(family_file), flag_semiring(g));
      Semiring s = pick_semiring(g, ff.semiring);
      RankedAlphabet sigma = ff.alphabet ? *ff.alphabet : RankedAlphabet::parse(alphabet_text);
      EaFormula ef = build_psi(ff.family, sigma.max_rank(), s.kind(), !non_strict);
      std::string text = to_sexpr(ef.psi) + "\n";
      if (out_file.empty()) {
        out << text;
      } else {
        write_file(out_file, text);
        out << "wrote " << out_file << ": dag size " << dag_size(ef.psi) << "\n";
      }
    };
  });

  // check-bbtc
  std::string trees_spec = "exhaustive:7";
  auto* check_bbtc_cmd = app.add_subcommand("check-bbtc", "automaton weight against the bounded closure of its family");
  check_bbtc_cmd->add_option("automaton", wta_file, "automaton file")->required();
  check_bbtc_cmd->add_option("--trees", trees_spec, "exhaustive:MAXSIZE | random:COUNT:MAXSIZE");
  check_bbtc_cmd->callback([&] {
    action = [&] {
      Wta a = parse_wta(read_file(wta_file));
      if (!g.semiring.empty()) pick_semiring(g, a.semiring());
      std::ostringstream note;
      auto trees = tree_corpus(trees_spec, a.alphabet(), g.seed, note);
      TcOptions o;
      o.eval = g.eval();
      BbtcReport r = check_bbtc(a, trees, o, g.cap_slices);
      out << note.str();
      out << "n=" << r.n << " progress=bounded:" << 2 * r.n << (r.renumbered ? " (final states renumbered)" : "")
          << "\n";
      if (!r.pass) {
        out << "counterexample " << render_tree(*r.counterexample) << " automaton "
            << a.semiring().render(*r.expected) << " closure " << a.semiring().render(*r.actual) << "\n";
        status = kCheckFailed;
      }
      result_line(out, r.pass, r.checked);
    };
  });

  // check-ea
  std::string psi_file;
  auto* check_ea_cmd = app.add_subcommand("check-ea", "desc+ closure of a family against its exists-forall formula");
  check_ea_cmd->add_option("family", family_file, "family file")->required();
  check_ea_cmd->add_option("--trees", trees_spec, "exhaustive:MAXSIZE | random:COUNT:MAXSIZE");
  check_ea_cmd->add_option("--psi", psi_file, "compare against this formula (free variable x) instead of the built one");
  check_ea_cmd->add_option("--alphabet", alphabet_text, "alphabet when the family file has none");
  check_ea_cmd->add_flag("--non-strict", non_strict, "accept families that are not step families");
  check_ea_cmd->callback([&] {
    action = [&] {
      FamilyFile ff = parse_family(read_file(family_file), flag_semiring(g));
      Semiring s = pick_semiring(g, ff.semiring);
      RankedAlphabet sigma = ff.alphabet ? *ff.alphabet : RankedAlphabet::parse(alphabet_text);
      std::ostringstream note;
      auto trees = tree_corpus(trees_spec, sigma, g.seed, note);
      out << note.str();
      bool pass = true;
      size_t checked = 0;
      if (psi_file.empty()) {
        EaReport r = check_ea(s, ff.family, trees, sigma.max_rank(), !non_strict);
        pass = r.pass;
        checked = r.checked;
        if (!pass)
          out << "counterexample " << render_tree(*r.counterexample) << " (" << r.what << ") closure "
              << s.render(*r.expected) << " formula " << s.render(*r.actual) << "\n";
      } else {
        Formula psi = parse_formula(read_file(psi_file), s);
        for (const auto& v : psi->free_vars())
          if (v != "x") throw InvalidInput("the formula may only have x free, found '" + v + "'");
        for (const auto& t : trees) {
          Weight tc = eval_tc(s, Progress::desc_plus(), ff.family, t);
          Assignment a;
          a.fo["x"] = Position{};
          Weight val = evaluate(s, psi, t, a, g.eval());
          ++checked;
          if (!(tc == val)) {
            pass = false;
            out << "counterexample " << render_tree(t) << " closure " << s.render(tc) << " formula "
                << s.render(val) << "\n";
            break;
          }
        }
      }
      if (!pass) status = kCheckFailed;
      result_line(out, pass, checked);
    };
  });

  // dnf
  std::string logic_text = "bmso";
  auto* dnf = app.add_subcommand("dnf", "rewrite a step formula as a sum of weighted guards");
  dnf->add_option("formula", formula_text, "s-expression, file, or @file")->required();
  dnf->add_option("--logic", logic_text, "bmso | bfomod")->check(CLI::IsMember({"bmso", "bfomod"}));
  dnf->callback([&] {
    action = [&] {
      Semiring s = flag_semiring(g);
      Formula f = parse_formula(text_arg(formula_text), s);
      auto terms = step_dnf(s, f, logic_text == "bmso" ? StepLogic::BMSO : StepLogic::BFOmod);
      size_t shown = 0;
      for (const auto& t : terms) {
        if (t.coefficient.is_zero()) continue;
        out << s.render(t.coefficient) << (g.tsv() ? "\t" : "  ") << to_sexpr(t.guard) << "\n";
        ++shown;
      }
      if (!g.tsv()) out << shown << " non-zero of " << terms.size() << " terms\n";
    };
  });

  for (auto* sub : app.get_subcommands({})) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInputError;
  }

  try {
    action();
  } catch (const ExplosionGuard& e) {
    std::cerr << "error: cap exceeded: " << e.what() << "\n";
    return kInputError;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  }
  std::cout << out.str();
  return status;
}
