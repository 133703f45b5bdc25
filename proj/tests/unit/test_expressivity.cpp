#include <doctest.h>

#include <algorithm>
#include <functional>

#include "oracles.hpp"
#include "wmso/error.hpp"
#include "wmso/expressivity.hpp"
#include "wmso/oracle.hpp"
#include "wmso/regular.hpp"

using namespace wmso;

namespace {
std::vector<std::string> chain(const FiniteTree& t) {
  std::vector<std::string> out;
  for (const FiniteTree* n = &t; !n->empty(); n = &n->left()) {
    CHECK(n->right().empty());
    out.push_back(n->label().str());
  }
  return out;
}

// Relabels a -> b, b -> a.
FiniteTree swap_ab(const FiniteTree& t) {
  if (t.empty()) return t;
  Letter l = t.label() == Letter("a") ? Letter("b") : t.label() == Letter("b") ? Letter("a") : t.label();
  return FiniteTree::node(l, swap_ab(t.left()), swap_ab(t.right()));
}
}  // namespace

TEST_SUITE("expressivity") {
  TEST_CASE("vaults") {
    CHECK(chain(make_vault({1, 1, 2})) == std::vector<std::string>{"a", "a", "b", "b"});
    CHECK(chain(make_vault({2, 1, 1})) == std::vector<std::string>{"a", "a", "b"});
    CHECK(chain(make_vault({1, 1, 1})) == std::vector<std::string>{"a", "b"});
    CHECK(print_tree(make_vault({1, 1, 2})) == "a(a(b(b,.),.),.)");
  }

  TEST_CASE("T trees") {
    FiniteTree t2 = make_T({2, 1, 3});
    // trunk nodes carry S11, S11, S22 (k = 0, 1, 2)
    const FiniteTree* n = &t2;
    std::vector<std::vector<std::string>> vaults;
    while (!n->empty()) {
      CHECK(n->label() == nd_letter());
      vaults.push_back(chain(n->left()));
      n = &n->right();
    }
    CHECK(vaults == std::vector<std::vector<std::string>>{{"a", "b"}, {"a", "b"}, {"a", "a", "b", "b"}});
    FiniteTree t1 = make_T({1, 1, 3});
    std::vector<std::vector<std::string>> v1;
    for (n = &t1; !n->empty(); n = &n->right()) {
      CHECK(n->label() == nd_letter());
      v1.push_back(chain(n->left()));
    }
    CHECK(v1 == std::vector<std::vector<std::string>>{{"a", "b"}, {"a", "a", "b"}, {"a", "b", "b"}});
    FiniteTree t3 = make_T({2, 3, 7});
    std::size_t trunk = 0;
    for (n = &t3; !n->empty(); n = &n->right()) ++trunk;
    CHECK(trunk == 7);
  }

  TEST_CASE("minmax statistic") {
    CHECK(minmax_statistic(make_vault({2, 3, 1}), {Letter("a"), Letter("b")}) == 2);
    CHECK(minmax_statistic(make_T({1, 2, 8}), {Letter("a"), Letter("b")}) == 2);
    CHECK(minmax_statistic(make_T({2, 1, 5}), {Letter("a"), Letter("b")}) == 4);
    CHECK(minmax_statistic(parse_tree("d(nd_bot,.)"), {Letter("a")}) == -1);
  }

  TEST_CASE("choice formula describes the choice sets") {
    Formula choice = choice_formula();
    CHECK(choice.free_vars() == VarSet{"Y"});
    for (const char* text : {"nd(a,b)", "a(nd(b,.),c)", "nd(nd(a,.),nd_bot)", "nd(a(nd_bot,.),b(.,c))", "a", "nd_bot",
                             "nd(.,nd(b,.))"}) {
      FiniteTree t = parse_tree(text);
      auto want = oracle::choice_sets(t);
      std::vector<Address> dom = t.domain();
      for (std::uint64_t code = 0; code < (std::uint64_t{1} << dom.size()); ++code) {
        std::set<Address> y;
        for (std::size_t j = 0; j < dom.size(); ++j)
          if (code >> j & 1) y.insert(dom[j]);
        bool expected = y.empty() || want.count(y);
        CHECK_MESSAGE(eval_semantics(choice, t, {{"Y", y}}) == expected, text);
      }
    }
  }

  TEST_CASE("sup formula shape") {
    Formula f = sup_formula({Letter("a"), Letter("b")});
    CHECK(f.kind() == FormulaKind::U);
    CHECK(f.vars().size() == 2);
    CHECK(f.is_sentence());
    CHECK_THROWS_AS(sup_formula({}), Error);
    CHECK_THROWS_AS(sup_formula({Letter("a"), Letter("b"), Letter("c"), Letter("d")}), Error);
  }

  TEST_CASE("chain scan") {
    PeriodReport atom = chain_period_scan(parse_formula("a(X)"), 4, 4);
    CHECK(atom.stabilized);
    CHECK(atom.m0 == 1);
    CHECK(atom.n0 == 1);
    Formula psi = parse_formula("Efin Y. X childL Y & b(Y)");
    PeriodReport r = chain_period_scan(psi, 8, 8);
    CHECK(r.stabilized);
    CHECK(r.period <= static_cast<int>(r.psi_types));
    CHECK_THROWS_AS(chain_period_scan(parse_formula("a(X) & b(Y)"), 3, 3), Error);
  }

  TEST_CASE("chain scan is symmetric under swapping letters") {
    Formula psi = parse_formula("Efin Y. X childL Y & a(Y) & !(b(X))");
    Formula swapped = parse_formula("Efin Y. X childL Y & b(Y) & !(a(X))");
    PeriodReport r = chain_period_scan(psi, 6, 6);
    PeriodReport s = chain_period_scan(swapped, 6, 6, Letter("b"), Letter("a"));
    CHECK(print_period_report(r) == print_period_report(s));
    CHECK(swap_ab(make_vault({2, 3, 1})) == make_vault({2, 3, 1}, Letter("b"), Letter("a")));
  }
}
