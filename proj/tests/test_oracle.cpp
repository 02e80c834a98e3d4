#include <doctest.h>

#include "nm/oracle.hpp"
#include "nm/tree.hpp"

using namespace nm;

namespace {

// Conclusion of the shipped tree fixture, and its (unprovable) antecedent.
const char* kFixtureConclusion =
    "((d -> (d -> b) -> g -> b) -> (a -> (a -> b) -> g -> b) -> s) -> s";
const char* kFixtureAntecedent =
    "(d -> ((d -> b) -> (g -> b))) -> ((a -> ((a -> b) -> (g -> b))) -> s)";

}  // namespace

TEST_CASE("decision procedure on known theorems and non-theorems") {
  CHECK(decide_ljt(parse_formula("a -> a")));
  CHECK(decide_ljt(parse_formula("x -> y -> x")));
  CHECK(decide_ljt(parse_formula("(a -> b) -> (b -> c) -> a -> c")));
  CHECK(decide_ljt(parse_formula("(a -> a -> b) -> a -> b")));
  CHECK(decide_ljt(parse_formula(kFixtureConclusion)));

  CHECK_FALSE(decide_ljt(parse_formula("a")));
  CHECK_FALSE(decide_ljt(parse_formula("a -> b")));
  CHECK_FALSE(decide_ljt(parse_formula("(a -> b) -> b")));
  CHECK_FALSE(decide_ljt(parse_formula(kFixtureAntecedent)));
  CHECK_FALSE(decide_ljt(parse_formula("((p -> q) -> p) -> p")));  // Peirce
}

TEST_CASE("sequent interface with multiset context") {
  Formula a = Formula::var("a"), b = Formula::var("b");
  CHECK(decide_sequent({{a, Formula::imp(a, b)}, b}));
  CHECK(decide_sequent({{a, a}, a}));
  CHECK_FALSE(decide_sequent({{Formula::imp(a, b)}, b}));
  CHECK(decide_sequent({{}, Formula::imp(a, a)}));
}

TEST_CASE("an unforced atom has a one-world countermodel") {
  auto model = countermodel_search(parse_formula("a"), 1);
  REQUIRE(model.has_value());
  CHECK(model->num_worlds == 1);
  CHECK(model->valid());
  CHECK_FALSE(model_forces(*model, 0, parse_formula("a")));
}

TEST_CASE("theorems admit no countermodel at any bound") {
  CHECK_FALSE(countermodel_search(parse_formula("a -> a"), 4).has_value());
  CHECK_FALSE(
      countermodel_search(parse_formula("x -> y -> x"), 3).has_value());
}

TEST_CASE("Peirce's law has a two-world countermodel") {
  Formula peirce = parse_formula("((p -> q) -> p) -> p");
  auto model = countermodel_search(peirce, 2);
  REQUIRE(model.has_value());
  CHECK(model->num_worlds <= 2);
  CHECK(model->valid());
  CHECK_FALSE(model_forces(*model, 0, peirce));
  CHECK_FALSE(countermodel_search(peirce, 1).has_value());  // needs 2 worlds
}

TEST_CASE("persistence is part of model validity") {
  KripkeModel m;
  m.num_worlds = 2;
  m.ge_mask = {0b11, 0b10};
  m.valuation = {{"a", 0b01}};  // true below, false above
  CHECK_FALSE(m.valid());
  m.valuation = {{"a", 0b10}};
  CHECK(m.valid());
}

TEST_CASE("random formulas are deterministic and within budget") {
  CHECK(render_formula(random_formula(0, 1, {"a"})) == "a");
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    Formula f = random_formula(seed, 9, {"a", "b", "c"});
    CHECK(f.size() <= 9);
    CHECK(f == random_formula(seed, 9, {"a", "b", "c"}));
  }
}

TEST_CASE("prover and bounded semantics agree on small samples") {
  for (std::uint64_t seed = 0; seed < 120; ++seed) {
    Formula f = random_formula(seed, 7, {"a", "b", "c"});
    CAPTURE(render_formula(f));
    auto model = countermodel_search(f, 4);
    if (decide_ljt(f)) {
      CHECK_FALSE(model.has_value());
    } else if (model) {
      CHECK(model->valid());
      CHECK_FALSE(model_forces(*model, 0, f));
    }
  }
}

TEST_CASE("generated proof conclusions are theorems") {
  for (std::uint64_t seed = 1; seed <= 25; ++seed) {
    TreeDerivation d = generate_random_proof(seed, 5, {"a", "b", "c"});
    CHECK(decide_ljt(d.conclusion()));
  }
}
