#include <doctest.h>

#include "wmso/error.hpp"
#include "wmso/oracle.hpp"
#include "wmso/regular.hpp"

using namespace wmso;

namespace {
const char* kBranch = "root q; q = a(., q);";
}  // namespace

TEST_SUITE("regular") {
  TEST_CASE("U on an infinite branch") {
    RegularTree rt = parse_regular_tree(kBranch);
    CHECK(check_sentence(parse_formula("U(X). a(X)"), rt));
    CHECK_FALSE(check_sentence(parse_formula("U(X). b(X)"), rt));
    auto table = compute_type_regular(parse_formula("Efin X. a(X)"), rt);
    CHECK(table.root_type().contains(PhiType::boolean(true)));
    auto ut = compute_type_regular(parse_formula("U(X). a(X)"), rt).root_type();
    CHECK(ut.coord(1).contains(PhiType::boolean(true)));
  }

  TEST_CASE("U with a tuple needs simultaneous growth") {
    RegularTree rt = parse_regular_tree("root q; q = a(r, q); r = b(., r);");
    CHECK(check_sentence(parse_formula("U(X,Y). a(X) & b(Y)"), rt));
    RegularTree only_a = parse_regular_tree("root q; q = a(r, q); r = b(.,.);");
    CHECK(check_sentence(parse_formula("U(X). a(X)"), only_a));
    CHECK(check_sentence(parse_formula("U(X). b(X)"), only_a));
    CHECK(check_sentence(parse_formula("U(X,Y). a(X) & b(Y)"), only_a));
    RegularTree left_b = parse_regular_tree("root q; q = a(., q);");
    CHECK_FALSE(check_sentence(parse_formula("U(X,Y). a(X) & b(Y)"), left_b));
  }

  TEST_CASE("U over nested quantifiers") {
    RegularTree rt = parse_regular_tree(kBranch);
    CHECK(check_sentence(parse_formula("U(X). Efin Y. Efin Z. Y childR Z & Z <= X & a(X)"), rt));
    CHECK_FALSE(check_sentence(parse_formula("U(X). Efin Y. Efin Z. Y childL Z & Z <= X"), rt));
    CHECK_THROWS_AS(check_sentence(parse_formula("a(X)"), rt), Error);
  }

  TEST_CASE("finite trees agree with the direct semantics") {
    for (const char* tree : {"a(b,a)", "a(a(b,.),b)", "b", "."}) {
      FiniteTree t = parse_tree(tree);
      RegularTree rt = RegularTree::from_finite(t);
      for (const char* text : {"U(X). a(X)", "Efin X. Efin Y. X childL Y & b(Y)", "!(Efin X. b(X) & !(X <= X))",
                               "Efin X. !(Efin Y. X childR Y)"}) {
        Formula f = parse_formula(text);
        CHECK(check_sentence(f, rt) == eval_semantics(f, t, {}));
      }
    }
  }

  TEST_CASE("types do not depend on the equation system") {
    RegularTree one = parse_regular_tree("root q; q = a(., q);");
    RegularTree two = parse_regular_tree("root p; p = a(., r); r = a(., p);");
    Formula f = parse_formula("U(X). Efin Y. a(X) & X <= Y");
    CHECK(compute_type_regular(f, one).root_type() == compute_type_regular(f, two).root_type());
  }

  TEST_CASE("dump_types lists every state and subformula") {
    RegularTree rt = parse_regular_tree(kBranch);
    std::string dump = dump_types(compute_type_regular(parse_formula("a(X)"), rt));
    CHECK(dump == "q\ta(X)\ttt\n");
  }

  TEST_CASE("variable markers are reserved") {
    CHECK(is_reserved(variable_marker(1)));
    CHECK(variable_marker(1) != variable_marker(2));
  }
}
