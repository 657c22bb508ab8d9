#include "doctest.h"
#include "support.hpp"
#include "tml/error.hpp"
#include "tml/normalform.hpp"
#include "tml/semantics.hpp"

using namespace tml;
using tmltest::Rng;

namespace {
const Formula p = Formula::atom("p");
const Formula q = Formula::atom("q");
const Formula s = Formula::atom("s");
}  // namespace

TEST_CASE("components") {
  const Formula f = Formula::conj(p, Formula::disj(Formula::box("x", p), Formula::exists("y", p)));
  CHECK(components(f) == std::set<Formula>{p, Formula::box("x", p), Formula::exists("y", p)});
  CHECK(components(p) == std::set<Formula>{p});
  CHECK(components(Formula::forall("x", p)) == std::set<Formula>{Formula::forall("x", p)});
}

TEST_CASE("modules and quantifier safety") {
  CHECK(is_module(Formula::dia("x", p)));
  CHECK(is_module(Formula::neg(p)));
  CHECK_FALSE(is_quantifier_safe(Formula::exists("y", p)));
  CHECK(is_quantifier_safe(Formula::conj(p, Formula::box("x", Formula::exists("y", p)))));
  CHECK(is_fsnf_dnf(tmltest::theta()));
  CHECK(is_fsnf_dnf(p));
}

TEST_CASE("decompose theta") {
  const FsnfClause c = decompose_clause(tmltest::theta());
  CHECK(c.literals.empty());
  CHECK_FALSE(c.matrix.has_value());
  CHECK(c.boxes.empty());
  REQUIRE(c.universals.contains("x"));
  CHECK(c.universals.at("x") == Formula::box("x", Formula::box("x", Formula::bot())));
  REQUIRE(c.skolemish.size() == 1);
  CHECK(recompose(c) == tmltest::theta());
}

TEST_CASE("decompose literals and modal parts") {
  FsnfClause c = decompose_clause(Formula::conj(p, Formula::neg(s)));
  CHECK(c.literals == std::vector<Formula>{p, Formula::neg(s)});
  CHECK(c.boxes.empty());
  CHECK(c.diamonds.empty());
  CHECK(c.skolemish.empty());
  c = decompose_clause(conj_all({Formula::box("x", p), Formula::dia("x", q), Formula::dia("x", s)}));
  CHECK(c.boxes.at("x") == p);
  CHECK(c.diamonds.at("x") == std::vector<Formula>{q, s});
  CHECK_THROWS_AS(decompose_clause(Formula::disj(p, q)), NotFsnf);
}

TEST_CASE("merge boxes") {
  CHECK(merge_boxes({Formula::box("x", p), Formula::box("x", s)}) ==
        std::vector<Formula>{Formula::box("x", Formula::conj(p, s))});
  CHECK(merge_boxes({Formula::box("x", p)}) == std::vector<Formula>{Formula::box("x", p)});
  CHECK(merge_boxes({Formula::box("x", p), Formula::box("y", s)}) ==
        std::vector<Formula>{Formula::box("x", p), Formula::box("y", s)});
}

TEST_CASE("md 0 drops quantifiers") {
  CHECK(to_fsnf(parse_formula("forall x. (p | exists y. s)")) == Formula::disj(p, s));
  CHECK(to_fsnf(p) == p);
}

TEST_CASE("to_fsnf preconditions") {
  CHECK_THROWS_AS(to_fsnf(Formula::box("x", p)), NotASentence);
  CHECK_THROWS_AS(to_fsnf(parse_formula("forall x. P(x)")), Error);
  FsnfOptions tight;
  tight.budget = 3;
  CHECK_THROWS_AS(to_fsnf(to_nnf(parse_formula("forall x. exists y. <x> (p | <y> s) & exists x. [x] (s | !p)")), {}, tight),
                  ResourceLimit);
}

TEST_CASE("nested existentials keep their satisfiability") {
  const Formula f = to_nnf(parse_formula("exists x. <x> exists y. <y> p"));
  const Formula t = to_fsnf(f);
  CHECK(is_fsnf_dnf(t));
  CHECK(oracle_sat(f, 4, 3, 2).has_value() == oracle_sat(to_nnf(t), 4, 3, modal_depth(t)).has_value());
}

TEST_CASE("fsnf shape on random propositional sentences") {
  Rng rng(41);
  std::size_t in_modules = 0, out_modules = 0;
  for (int i = 0; i < 300; ++i) {
    const Formula f = to_nnf(tmltest::random_ptml(rng));
    const Formula t = to_fsnf(f);
    CHECK_MESSAGE(is_fsnf_dnf(t), render_formula(f));
    CHECK(is_propositional_atoms(t));
    CHECK(is_sentence(t));
    in_modules += count_modules(f);
    out_modules += count_modules(t);
  }
  MESSAGE("module growth " << static_cast<double>(out_modules) / static_cast<double>(in_modules));
}

TEST_CASE("fsnf preserves satisfiability on small propositional sentences") {
  Rng rng(43);
  tmltest::GenOptions g;
  g.max_modules = 4;
  for (int i = 0; i < 40; ++i) {
    const Formula f = to_nnf(tmltest::random_ptml(rng, g));
    const Formula t = to_nnf(to_fsnf(f));
    const bool a = oracle_sat(f, 4, 2, modal_depth(f)).has_value();
    const bool b = oracle_sat(t, 6, 2, modal_depth(t)).has_value();
    CHECK_MESSAGE(a == b, render_formula(f) << "  =>  " << render_formula(t));
  }
}
