#include "doctest.h"

#include "ptv/syntax.hpp"

#include <random>

using namespace ptv;

namespace {
Formula F(const char* s) { return parse_formula(s); }

// deterministic random formula generator (seed pinned below)
Formula random_formula(std::mt19937& rng, int max_depth) {
  std::uniform_int_distribution<int> leaf(0, 3);
  std::uniform_int_distribution<int> node(0, 4);
  if (max_depth <= 1) {
    switch (leaf(rng)) {
      case 0: return Formula::mk_atom("p");
      case 1: return Formula::mk_atom("q");
      case 2: return Formula::mk_atom("r");
      default: return Formula::mk_bot();
    }
  }
  switch (node(rng)) {
    case 0: return Formula::mk_and(random_formula(rng, max_depth - 1),
                                   random_formula(rng, max_depth - 1));
    case 1: return Formula::mk_or(random_formula(rng, max_depth - 1),
                                  random_formula(rng, max_depth - 1));
    case 2: return Formula::mk_imp(random_formula(rng, max_depth - 1),
                                   random_formula(rng, max_depth - 1));
    case 3: return Formula::mk_neg(random_formula(rng, max_depth - 1));
    default: return random_formula(rng, 1);
  }
}
} // namespace

TEST_CASE("syntax: pinned parses") {
  CHECK(F("p -> q | r") == Formula::mk_imp(Formula::mk_atom("p"),
                                           Formula::mk_or(Formula::mk_atom("q"),
                                                          Formula::mk_atom("r"))));
  CHECK(F("~~p -> p") ==
        Formula::mk_imp(Formula::mk_neg(Formula::mk_neg(Formula::mk_atom("p"))),
                        Formula::mk_atom("p")));
  CHECK(F("(p & (q -> s) & (r -> s)) -> s") ==
        Formula::mk_imp(
            Formula::mk_and(
                Formula::mk_and(Formula::mk_atom("p"),
                                Formula::mk_imp(Formula::mk_atom("q"), Formula::mk_atom("s"))),
                Formula::mk_imp(Formula::mk_atom("r"), Formula::mk_atom("s"))),
            Formula::mk_atom("s")));
  // precedence and associativity
  CHECK(F("p -> q -> r") == F("p -> (q -> r)"));
  CHECK(F("p & q & r") == F("(p & q) & r"));
  CHECK(F("p | q & r") == F("p | (q & r)"));
  CHECK(F("~p & q") == F("(~p) & q"));
  CHECK(F("_|_") == Formula::mk_bot());
  CHECK(F("p # trailing comment") == F("p"));
}

TEST_CASE("syntax: parse errors carry positions") {
  CHECK_THROWS_AS(F(""), ParseError);
  CHECK_THROWS_AS(F("p ->"), ParseError);
  CHECK_THROWS_AS(F("(p | q"), ParseError);
  CHECK_THROWS_AS(F("p q"), ParseError);
  CHECK_THROWS_AS(F("P"), ParseError);
  CHECK_THROWS_AS(F("p - q"), ParseError);
  try {
    F("p & ");
  } catch (const ParseError& e) {
    CHECK(e.position == 4); // 0-based offset of the missing operand
  }
}

TEST_CASE("syntax: pinned prints") {
  CHECK(print_formula(F("p -> q | r")) == "p -> q | r");
  CHECK(print_formula(Formula::mk_bot()) == "bot");
  CHECK(print_formula(F("(p & q) -> r")) == "p & q -> r");
  CHECK(print_formula(F("(p -> q) -> r")) == "(p -> q) -> r");
  CHECK(print_formula(F("p & (q & r)")) == "p & (q & r)");
  CHECK(print_formula(F("~~p -> p")) == "~~p -> p");
  CHECK(print_formula(F("~(p & q)")) == "~(p & q)");
  CHECK(print_formula(F("p -> ~q")) == "p -> ~q");
  CHECK(print_formula(F("(p | q) & r")) == "(p | q) & r");
}

TEST_CASE("syntax: atoms and reserved names") {
  CHECK_THROWS_AS(Atom("bot"), std::invalid_argument);
  CHECK_THROWS_AS(Atom("P"), std::invalid_argument);
  CHECK_THROWS_AS(Atom("9x"), std::invalid_argument);
  CHECK(Atom("p_1").name() == "p_1");
  CHECK(Atom::falsum().is_falsum());
  CHECK(F("botx") == Formula::mk_atom("botx")); // max munch, not the keyword
}

TEST_CASE("syntax: atoms_of and disjunction-freeness") {
  CHECK(atoms_of(F("p & q -> r")) == std::set<Atom>{Atom("p"), Atom("q"), Atom("r")});
  CHECK(atoms_of(F("bot")).empty());
  CHECK(atoms_of(F("~~p -> p")) == std::set<Atom>{Atom("p")});
  CHECK(is_disjunction_free(F("(p -> q) -> r")));
  CHECK_FALSE(is_disjunction_free(F("p -> (q | r)")));
  CHECK(is_disjunction_free(F("p")));
  CHECK_FALSE(is_disjunction_free(F("~p"))); // bot counts
}

TEST_CASE("syntax: parse/print round trip on random trees") {
  std::mt19937 rng(20240917); // pinned seed
  for (int i = 0; i < 2000; ++i) {
    Formula f = random_formula(rng, 8);
    Formula g = parse_formula(print_formula(f));
    CHECK(g == f);
  }
}

TEST_CASE("syntax: depth convention") {
  CHECK(F("p").depth() == 1);
  CHECK(F("p & q").depth() == 2);
  CHECK(F("p -> (q | r)").depth() == 3);
  CHECK(F("~~p -> p").depth() == 4);
}

TEST_CASE("syntax: garbage input only ever raises ParseError") {
  std::mt19937 rng(77001); // pinned seed
  const std::string alphabet = "pq r()->|&~#_=>,[]\"bot\n\t!x1";
  std::uniform_int_distribution<std::size_t> pick(0, alphabet.size() - 1);
  std::uniform_int_distribution<int> len(0, 40);
  int parsed = 0;
  for (int i = 0; i < 5000; ++i) {
    std::string s;
    int n = len(rng);
    for (int j = 0; j < n; ++j) s += alphabet[pick(rng)];
    try {
      (void)parse_formula(s);
      ++parsed;
    } catch (const ParseError&) {
      // expected for most inputs
    }
  }
  CHECK(parsed > 0); // some random strings are genuine formulas
}
