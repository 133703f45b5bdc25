#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "wmso/error.hpp"
#include "wmso/expressivity.hpp"
#include "wmso/formula.hpp"
#include "wmso/oracle.hpp"
#include "wmso/pipeline.hpp"
#include "wmso/random.hpp"
#include "wmso/regular.hpp"
#include "wmso/sup.hpp"

using namespace wmso;

namespace {

constexpr int kTrue = 0, kFalse = 1, kError = 2, kDisagree = 3;

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Tree files hold either an equation system or a single finite term.
RegularTree read_tree(const std::string& path) {
  std::string text = slurp(path);
  if (text.find("root") != std::string::npos) return parse_regular_tree(text);
  return RegularTree::from_finite(parse_tree(text));
}

Formula read_formula(const std::string& path) { return parse_formula(slurp(path)); }

int verdict(bool b) {
  std::cout << (b ? "true" : "false") << "\n";
  return b ? kTrue : kFalse;
}

struct CheckArgs {
  std::string tree, formula, engine = "fixpoint";
  bool all = false;
  std::optional<std::size_t> max_depth;
};

bool run_engine(const std::string& engine, const Formula& phi, const RegularTree& rt,
                const std::optional<std::size_t>& max_depth) {
  if (engine == "fixpoint") return check_sentence(phi, rt);
  if (engine == "pipeline") return check_via_pipeline(phi, rt);
  if (!phi.is_sentence()) throw Error("formula is not a sentence");
  if (rt.is_finite()) return eval_semantics(phi, rt.unfold_finite(), {});
  if (!max_depth) throw Error("brute engine needs a finite tree or --max-depth");
  return eval_semantics(phi, truncate(rt, *max_depth), {});
}

int cmd_check(const CheckArgs& a) {
  RegularTree rt = read_tree(a.tree);
  Formula phi = read_formula(a.formula);
  if (!a.all) return verdict(run_engine(a.engine, phi, rt, a.max_depth));
  std::vector<std::string> engines{"fixpoint", "pipeline"};
  if (rt.is_finite()) engines.push_back("brute");
  std::vector<bool> got;
  for (const auto& e : engines) {
    got.push_back(run_engine(e, phi, rt, a.max_depth));
    std::cout << (got.back() ? "true" : "false") << "\n";
  }
  for (std::size_t i = 1; i < got.size(); ++i)
    if (got[i] != got[0]) {
      std::cerr << "engines disagree:";
      for (std::size_t j = 0; j < got.size(); ++j) std::cerr << " " << engines[j] << "=" << (got[j] ? "true" : "false");
      std::cerr << "\n";
      return kDisagree;
    }
  return got[0] ? kTrue : kFalse;
}

int cmd_types(const std::string& tree, const std::string& formula) {
  std::cout << dump_types(compute_type_regular(read_formula(formula), read_tree(tree)));
  return kTrue;
}

LetterSet split_letters(const std::string& s) {
  LetterSet out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto b = item.find_first_not_of(" \t");
    if (b == std::string::npos) continue;
    item = item.substr(b, item.find_last_not_of(" \t") - b + 1);
    if (!valid_letter_spelling(item)) throw Error("bad letter '" + item + "'");
    out.insert(Letter(item));
  }
  return out;
}

int cmd_sup(const std::string& tree, const std::vector<std::string>& queries) {
  DerivationGrammar g = tree_to_grammar(read_tree(tree));
  std::vector<LetterSet> sets;
  for (const auto& q : queries) sets.push_back(split_letters(q));
  if (sets.empty()) sets.emplace_back();
  bool all = true;
  for (const auto& a : sets) {
    bool b = decide_sup(g, a);
    all = all && b;
    std::cout << print_marks({a}) << "\t" << (b ? "true" : "false") << "\n";
  }
  return all ? kTrue : kFalse;
}

int cmd_pipeline(const std::string& tree, const std::string& formula, const std::string& trace) {
  RegularTree rt = read_tree(tree);
  Formula phi = read_formula(formula);
  StageHook hook;
  if (!trace.empty()) {
    std::filesystem::create_directories(trace);
    hook = [&](std::size_t i, const Op& op, const RegularTree& out) {
      char name[32];
      std::snprintf(name, sizeof name, "stage-%03zu.txt", i);
      std::ofstream f(std::filesystem::path(trace) / name);
      f << "# " << op.label << "\n" << print_regular_tree(out);
    };
  }
  return verdict(check_via_pipeline(phi, rt, hook));
}

struct GenArgs {
  std::string what;
  std::vector<int> mn;
  int p = 1, depth = 1;
  std::size_t size = 4;
  std::vector<std::string> letters{"a", "b"};
  std::uint64_t seed = 0;
};

int cmd_gen(const GenArgs& a) {
  std::vector<Letter> letters;
  for (const auto& s : a.letters) letters.emplace_back(s);
  if (a.what == "vault") {
    if (a.mn.size() != 2) throw Error("vault needs m and n");
    if (a.mn[0] < 1 || a.mn[1] < 1 || a.p < 1) throw Error("vault needs m, n, p >= 1");
    std::cout << print_tree(make_vault({a.mn[0], a.mn[1], a.p})) << "\n";
  } else if (a.what == "T1" || a.what == "T2") {
    if (a.p < 1 || a.depth < 1) throw Error("T1/T2 need p >= 1 and depth >= 1");
    std::cout << print_tree(make_T({a.what == "T1" ? 1 : 2, a.p, a.depth})) << "\n";
  } else if (a.what == "tree") {
    Rng rng(a.seed);
    std::cout << print_tree(random_tree(rng, a.size, letters)) << "\n";
  } else if (a.what == "regular") {
    Rng rng(a.seed);
    std::cout << print_regular_tree(random_regular_tree(rng, a.size, letters));
  } else if (a.what == "formula") {
    Rng rng(a.seed);
    FormulaShape shape;
    shape.letters = letters;
    shape.size = static_cast<int>(a.size);
    std::cout << print_formula(random_formula(rng, shape)) << "\n";
  } else {
    throw Error("unknown generator '" + a.what + "'");
  }
  return kTrue;
}

int cmd_scan(const std::string& formula, int m_max, int n_max) {
  PeriodReport r = chain_period_scan(read_formula(formula), m_max, n_max);
  std::cout << print_period_report(r);
  return r.stabilized ? kTrue : kFalse;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Model checker for WMSO+U_tup on finite and regular trees"};
  app.require_subcommand(1);
  app.fallthrough();
  std::uint64_t seed = 0;
  app.add_option("--seed", seed, "seed for random generators")->capture_default_str();

  CheckArgs ca;
  auto* check = app.add_subcommand("check", "decide a sentence on a tree");
  check->add_option("tree", ca.tree)->required();
  check->add_option("formula", ca.formula)->required();
  check->add_option("--engine", ca.engine)->check(CLI::IsMember({"fixpoint", "pipeline", "brute"}));
  check->add_flag("--all-engines", ca.all);
  check->add_option("--max-depth", ca.max_depth, "truncation depth for the brute engine");

  std::string tree, formula, trace;
  auto* types = app.add_subcommand("types", "print the state type table");
  types->add_option("tree", tree)->required();
  types->add_option("formula", formula)->required();

  std::vector<std::string> queries;
  auto* sup = app.add_subcommand("sup", "simultaneous unboundedness of letter sets");
  sup->add_option("tree", tree)->required();
  sup->add_option("letters", queries, "comma-separated letter sets");

  auto* pipe = app.add_subcommand("pipeline", "decide a sentence through the transducer pipeline");
  pipe->add_option("tree", tree)->required();
  pipe->add_option("formula", formula)->required();
  pipe->add_option("--trace", trace, "directory for per-stage trees");

  GenArgs ga;
  auto* gen = app.add_subcommand("gen", "print a generated tree");
  gen->add_option("what", ga.what, "T1, T2, vault, tree, regular or formula")->required();
  gen->add_option("mn", ga.mn, "vault exponents m n");
  gen->add_option("--p", ga.p);
  gen->add_option("--depth", ga.depth);
  gen->add_option("--size", ga.size, "nodes, states or atoms of random output");
  gen->add_option("--letters", ga.letters)->delimiter(',');

  int m_max = 12, n_max = 12;
  auto* scan = app.add_subcommand("scan", "type periodicity on a^m b^n chains");
  scan->add_option("formula", formula)->required();
  scan->add_option("--m-max", m_max)->capture_default_str();
  scan->add_option("--n-max", n_max)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kError;
  }

  try {
    if (*check) return cmd_check(ca);
    if (*types) return cmd_types(tree, formula);
    if (*sup) return cmd_sup(tree, queries);
    if (*pipe) return cmd_pipeline(tree, formula, trace);
    if (*gen) {
      ga.seed = seed;
      return cmd_gen(ga);
    }
    if (*scan) return cmd_scan(formula, m_max, n_max);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kError;
  }
  return kError;
}
