#include "doctest.h"
#include "support.hpp"
#include "tml/decide.hpp"
#include "tml/error.hpp"
#include "tml/semantics.hpp"

using namespace tml;
using tmltest::Rng;

namespace {

std::vector<std::string> agents(std::size_t k) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < k; ++i) out.push_back("a" + std::to_string(i));
  return out;
}

}  // namespace

TEST_CASE("ground: single agent diamond") {
  const GroundFormula g = ground(to_nnf(parse_formula("exists x. <x> p")), {"d"});
  CHECK(g.render() == "<d> p@");
}

TEST_CASE("ground: variable-free body collapses") {
  const GroundFormula g = ground(parse_formula("forall x. p"), {"d1", "d2"});
  CHECK(g.render() == "p@");
}

TEST_CASE("ground: both quantifiers expand") {
  const GroundFormula g = ground(parse_formula("forall x. exists y. R(x,y)"), {"a", "b"});
  CHECK(g.render() == "((R@a,a | R@a,b) & (R@b,a | R@b,b))");
  CHECK(g.num_atoms() == 4);
  CHECK_THROWS_AS(ground(parse_formula("p"), {}), EmptyDomain);
}

TEST_CASE("mm_sat: propositional and modal contradictions") {
  GroundFormula g;
  g.set_agents({"d"});
  const int p = g.atom("p", {});
  g.set_root(g.conj({g.literal(p, true), g.literal(p, false)}));
  CHECK_FALSE(mm_sat(g, 0, 1000).has_value());

  g.set_root(g.conj({g.dia(0, g.literal(p, true)), g.box(0, g.literal(p, false))}));
  CHECK_FALSE(mm_sat(g, 1, 1000).has_value());

  g.set_root(g.conj({g.dia(0, g.literal(p, true)), g.dia(0, g.literal(p, false))}));
  const auto m = mm_sat(g, 1, 1000);
  REQUIRE(m.has_value());
  CHECK(m->model.num_worlds() == 3);
}

TEST_CASE("mm_sat: depth limit and budget") {
  GroundFormula g;
  g.set_agents({"d"});
  g.set_root(g.dia(0, g.dia(0, 1)));
  CHECK(mm_sat(g, 2, 1000).has_value());
  CHECK_FALSE(mm_sat(g, 1, 1000).has_value());
  CHECK_THROWS_AS(mm_sat(g, 2, 1), ResourceLimit);
}

TEST_CASE("mm_sat agrees with constant-domain enumeration on tiny inputs") {
  Rng rng(47);
  tmltest::GenOptions go;
  go.max_modules = 4;
  OracleOptions cd;
  cd.constant_domain = true;
  for (int i = 0; i < 150; ++i) {
    const Formula f = to_nnf(tmltest::random_sentence(rng, go));
    const std::size_t k = static_cast<std::size_t>(tmltest::uniform(rng, 1, 2));
    const GroundFormula g = ground(f, agents(k));
    const int md = modal_depth(f);
    const auto m = mm_sat(g, md, 1'000'000);
    const auto o = oracle_sat(f, 16, k, md, cd);
    CHECK_MESSAGE(m.has_value() == o.has_value(), render_formula(f) << " k=" << k);
    if (m) {
      CHECK(check_sentence(m->model, m->root, f));
      CHECK(m->max_height() <= md);
    }
  }
}

TEST_CASE("solve: examples") {
  SatResult r = solve(parse_formula("p & !p"));
  CHECK(r.status == SatResult::Status::Unsat);
  CHECK(r.k == 1);

  r = solve(parse_formula("exists x. <x> p"));
  CHECK(r.status == SatResult::Status::Sat);
  CHECK(r.k == 1);
  REQUIRE(r.certificate.has_value());
  CHECK(check_sentence(r.certificate->model, r.certificate->root, parse_formula("exists x. <x> p")));

  SolverConfig five;
  five.max_agents = 5;
  r = solve(tmltest::theta(), five);
  CHECK(r.status == SatResult::Status::Sat);
  CHECK(r.k <= 5);
  REQUIRE(r.certificate.has_value());
  CHECK(check_sentence(r.certificate->model, r.certificate->root, tmltest::theta()));
}

TEST_CASE("solve: quantified contradiction is only refuted up to the limit") {
  SolverConfig cfg;
  cfg.max_agents = 2;
  const SatResult r = solve(parse_formula("forall x. P(x) & exists y. !P(y)"), cfg);
  CHECK(r.status == SatResult::Status::UnsatUpTo);
  CHECK(r.k == 2);
  REQUIRE(r.bound.has_value());
  CHECK(r.bound->log2 > 2);
}

TEST_CASE("solve: needs two agents") {
  // two agents with different P-values are needed at the root
  const Formula f = parse_formula("exists x. P(x) & exists y. !P(y)");
  SolverConfig cfg;
  cfg.max_agents = 3;
  const SatResult r = solve(f, cfg);
  CHECK(r.status == SatResult::Status::Sat);
  CHECK(r.k == 2);
}

TEST_CASE("solve: parallel width gives the same answer") {
  Rng rng(53);
  for (int i = 0; i < 30; ++i) {
    const Formula f = tmltest::random_sentence(rng);
    SolverConfig a, b;
    b.parallel_width = 3;
    const SatResult x = solve(f, a), y = solve(f, b);
    CHECK(x.status == y.status);
    CHECK(x.k == y.k);
  }
}

TEST_CASE("solve: rejects bad inputs") {
  CHECK_THROWS_AS(solve(Formula::box("x", Formula::top())), NotASentence);
  CHECK_THROWS_AS(solve(parse_formula("exists x. E_(x)")), NameClash);
}

TEST_CASE("bound report for theta") {
  const BoundReport r = theoretical_bound_report(tmltest::theta());
  CHECK(r.bound.q == 2);
  CHECK(r.input_size > 0);
  CHECK(r.fsnf_size > 0);
  const BoundReport t = theoretical_bound_report(Formula::top());
  CHECK(t.bound.exact().has_value());
}
