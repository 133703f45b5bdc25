#include <doctest.h>

#include "oracles.hpp"
#include "wmso/error.hpp"
#include "wmso/regular.hpp"
#include "wmso/transducer.hpp"

using namespace wmso;

namespace {
const char* kIdentity = "states q; initial q; delta q a -> a((q,L),(q,R)); delta q b -> b((q,L),(q,R)); delta q bot -> .;";
const char* kDoubling =
    "states q; initial q; delta q a -> a(a((q,L),(q,L)), a((q,R),(q,R))); delta q b -> b; delta q bot -> .;";
}  // namespace

TEST_SUITE("transducer") {
  TEST_CASE("validation") {
    CHECK_NOTHROW(validate(parse_transducer(kIdentity)));
    CHECK_NOTHROW(validate(parse_transducer(kDoubling)));
    CHECK_THROWS_AS(validate(parse_transducer("states q; initial q; delta q a -> (q,L); delta q bot -> .;")), Error);
    CHECK_THROWS_AS(validate(parse_transducer("states q p; initial q; delta q a -> (p,L); delta p a -> (q,R);"
                                              " delta q bot -> .; delta p bot -> .;")),
                    Error);
    // a state leaf must not be an inner node
    CHECK_THROWS(parse_transducer("states q; initial q; delta q a -> (q,L)(a,a); delta q bot -> .;"));
    CHECK_THROWS_AS(validate(parse_transducer("states q; initial q; delta q a -> a; delta q bot -> a((q,L),.);")),
                    Error);
  }

  TEST_CASE("apply_finite") {
    Transducer id = parse_transducer(kIdentity);
    CHECK(print_tree(apply_finite(id, parse_tree("a(b,.)"))) == "a(b,.)");
    Transducer dbl = parse_transducer(kDoubling);
    CHECK(print_tree(apply_finite(dbl, parse_tree("a(b,.)"))) == "a(a(b,b),a)");
    Transducer c = parse_transducer("states q; initial q; delta q a -> a((q,L),.); delta q bot -> c;");
    CHECK(print_tree(apply_finite(c, parse_tree("."))) == "c");
    CHECK(print_tree(apply_finite(c, parse_tree("a(a,.)"))) == "a(a(c,.),.)");
    CHECK_THROWS_AS(apply_finite(c, parse_tree("b")), Error);
  }

  TEST_CASE("apply_regular commutes with truncation") {
    Transducer dbl = parse_transducer(kDoubling);
    RegularTree branch = parse_regular_tree("root q; q = a(., q);");
    RegularTree out = apply_regular(dbl, branch);
    // every output level needs at most two input levels
    for (std::size_t d = 1; d <= 4; ++d) {
      FiniteTree got = truncate(out, d);
      FiniteTree want = apply_finite(dbl, truncate(branch, 2 * d));
      CHECK(print_tree(got) == print_tree(truncate(RegularTree::from_finite(want), d)));
    }
    Transducer id = parse_transducer(kIdentity);
    RegularTree full = parse_regular_tree("root q; q = a(p, q); p = b(q, .);");
    CHECK(truncate(apply_regular(id, full), 8) == truncate(full, 8));
  }

  TEST_CASE("random transducers commute with truncation") {
    Rng rng(7);
    std::vector<Letter> letters{Letter("a"), Letter("b")};
    for (int i = 0; i < 100; ++i) {
      Transducer tr = oracle::random_transducer(rng, letters, 1 + i % 3);
      REQUIRE_NOTHROW(validate(tr));
      RegularTree rt = random_regular_tree(rng, 3, letters);
      if (!rt.is_finite()) continue;
      RegularTree out = apply_regular(tr, rt);
      FiniteTree want = apply_finite(tr, rt.unfold_finite());
      CHECK(truncate(out, 12) == truncate(RegularTree::from_finite(want), 12));
    }
  }

  TEST_CASE("text round-trip") {
    Transducer t = parse_transducer(kDoubling);
    CHECK(print_transducer(parse_transducer(print_transducer(t))) == print_transducer(t));
  }

  TEST_CASE("path reflections") {
    RegularTree branch = parse_regular_tree("root q; q = a(., q);");
    PathLabelReflection is_a{"", [](const Letter& l) { return l == Letter("a"); }, "is-a"};
    for (const auto& s : reflect_path(branch, is_a).states()) CHECK(s.letter == Letter("a|tt"));
    RegularTree small = parse_regular_tree("root q; q = a(., p); p = b;");
    PathLabelReflection rrl{"RRL", [](const Letter&) { return true; }, "rrl"};
    RegularTree r = reflect_path(small, rrl);
    CHECK(r.state(r.root()).letter == Letter("a|ff"));
    PathLabelReflection rb{"R", [](const Letter& l) { return l == Letter("b"); }, "rb"};
    RegularTree both = reflect_paths(small, {rb, is_a});
    CHECK(both.state(both.root()).letter == Letter("a|tt|tt"));
  }

  TEST_CASE("F transitions on the empty tree") {
    Formula psi = parse_formula("a(X)");
    std::set<Letter> alphabet{Letter("a|tt"), Letter("b|tt")};
    FConstruction f = build_F(psi, {"X"}, alphabet);
    REQUIRE(f.types.size() == 2);
    CHECK(f.transducer.num_states() == 3);
    for (std::size_t i = 0; i < f.types.size(); ++i) {
      const OutTree& bot = f.transducer.delta_bot(static_cast<int>(i + 1));
      if (f.types[i] == PhiType::boolean(true))
        CHECK(bot == nullptr);
      else
        CHECK((bot && bot->letter == nd_bot_letter()));
    }
    CHECK_NOTHROW(validate(f.transducer));
  }

  TEST_CASE("witness sets of a single node match the language of F") {
    Formula psi = parse_formula("a(X)");
    FiniteTree t = parse_tree("a");
    FiniteTree deco = oracle::decorate(psi, t);
    CHECK(print_tree(deco) == "a|tt");
    FConstruction f = build_F(psi, {"X"}, {deco.label()});
    for (std::size_t i = 0; i < f.types.size(); ++i) {
      FiniteTree out = apply_finite_from(f.transducer, static_cast<int>(i + 1), deco);
      CHECK(oracle::marker_counts(out, 1, 1) == oracle::witness_cardinalities(psi, {"X"}, t, f.types[i], 1));
    }
  }

  TEST_CASE("cleanup") {
    std::vector<PhiType> types{PhiType::boolean(true), PhiType::boolean(false)};
    Letter deco("a|b|tt|m|tt|ff|ff|tt");
    Letter hash = hash_letter().append("x");
    Transducer c = build_cleanup(types, 1, {deco, hash});
    FiniteTree in = FiniteTree::node(deco, FiniteTree::node(deco),
                                     FiniteTree::node(hash, FiniteTree::node(deco), FiniteTree::node(deco)));
    FiniteTree out = apply_finite(c, in);
    Letter want("a|b|[{tt};{ff}]");
    CHECK(out.label() == want);
    CHECK(out.left().label() == want);
    CHECK(out.right().label() == want);
    CHECK(out.size() == 3);
    FiniteTree plain = FiniteTree::node(deco, FiniteTree::node(deco));
    CHECK(apply_finite(c, plain).size() == 2);
  }

  TEST_CASE("marker family") {
    auto fam = marker_family(2);
    REQUIRE(fam.size() == 4);
    CHECK(fam[0].empty());
    CHECK(fam[3] == LetterSet{variable_marker(1), variable_marker(2)});
  }
}
