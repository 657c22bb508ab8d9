#include "doctest.h"
#include "support.hpp"
#include "tml/error.hpp"
#include "tml/model_io.hpp"
#include "tml/semantics.hpp"
#include "tml/types.hpp"

using namespace tml;

namespace {

TreeModel worked() {
  const KripkeModel m = load_model(tmltest::fixture_path("worked_example.json"));
  return as_tree(m, m.world("r"));
}

std::size_t count_types(const TreeModel& t, int w, const SubformulaClosure& sf) {
  std::set<OneType> types;
  for (int c : t.model.delta(w)) types.insert(one_type(t, w, c, sf));
  return types.size();
}

}  // namespace

TEST_CASE("theta has two existential parts") {
  const auto parts = existential_parts(tmltest::theta());
  REQUIRE(parts.size() == 2);
  CHECK(parts[0].kind == ExistentialKind::DeltaX);
  CHECK(parts[1].kind == ExistentialKind::Psi);
  CHECK_THROWS_AS(existential_parts(parse_formula("exists x. (p | exists y. <y> p)")), NotFsnf);
}

TEST_CASE("one-type counts on the fixture") {
  const TreeModel t = worked();
  const SubformulaClosure sf(tmltest::theta());
  CHECK(count_types(t, t.model.world("r"), sf) == 1);
  CHECK(count_types(t, t.model.world("w0"), sf) == 3);
}

TEST_CASE("two-types are symmetric under the swap") {
  const TreeModel t = worked();
  const SubformulaClosure sf(tmltest::theta());
  const int w = t.model.world("w0");
  for (int c : t.model.delta(w))
    for (int d : t.model.delta(w)) {
      const TwoType a = two_type(t, w, c, d, sf), b = two_type(t, w, d, c, sf);
      CHECK(a.gamma_xy == b.gamma_yx);
      CHECK(a.gamma_yx == b.gamma_xy);
    }
  CHECK_THROWS_AS(two_type(t, t.root, t.model.agent("1"), t.model.agent("0"), sf), AgentNotLive);
}

TEST_CASE("representatives and witnesses") {
  const TreeModel t = worked();
  const SubformulaClosure sf(tmltest::theta());
  const auto parts = existential_parts(tmltest::theta());
  const int w0 = t.model.world("w0");
  const WorldTypes wt = analyze_world(t, w0, sf, parts);
  CHECK(wt.types.size() == 3);
  // the incoming agent represents its own type
  const int in = t.model.agent("0");
  CHECK(wt.representative[wt.type_of.at(in)] == in);
  for (const auto& [c, wit] : wt.witnesses) {
    CHECK(wit.size() == parts.size());
    for (int d : wit) CHECK(t.model.delta(w0).contains(d));
  }
}

TEST_CASE("compression of the fixture") {
  const CompressResult r = compress(worked(), tmltest::theta());
  CHECK(r.q == 2);
  REQUIRE_FALSE(r.census.empty());
  CHECK(r.census.front().world == "r");
  CHECK(r.census.front().type_agents == 6);
  CHECK(r.census.front().live_agents == 6);
  bool saw_w = false;
  for (const auto& c : r.census)
    if (c.source == "w0" || c.source == "w1") {
      saw_w = true;
      CHECK(c.type_agents == 18);
    }
  CHECK(saw_w);
  CHECK(validate(r.model.model).empty());
  CHECK(check_sentence(r.model.model, r.model.root, tmltest::theta()));
  // round trip through the file format
  const KripkeModel back = read_model_json(write_model_json(r.model.model));
  CHECK(check_sentence(back, *back.root(), tmltest::theta()));
}

TEST_CASE("compression preconditions") {
  const TreeModel t = worked();
  CHECK_THROWS_AS(compress(t, parse_formula("forall x. [x] forall y. [y] !p")), NotSatisfiedAtRoot);
  CHECK_THROWS_AS(compress(t, parse_formula("p | !p")), HeightExceeded);
  const KripkeModel lit = load_model(tmltest::fixture_path("worked_example_literal.json"));
  CHECK_THROWS_AS(compress(as_tree(lit, lit.world("r")), tmltest::theta()), NotSatisfiedAtRoot);
}

TEST_CASE("agent bound for theta") {
  const AgentBound b = agent_bound(tmltest::theta());
  CHECK(b.q == 2);
  CHECK(b.factor == 6);
  const std::size_t m = sf_closure(tmltest::theta()).size();
  CHECK(b.sf_size == m);
  // 6 * 2^(4m + 2^(2m)); log2 = log2 6 + 4m + 2^(2m)
  CHECK(b.log2 == doctest::Approx(std::log2(6.0) + 4.0 * static_cast<double>(m) + std::ldexp(1.0, static_cast<int>(2 * m))));
  CHECK_FALSE(b.exact().has_value());
}

TEST_CASE("agent bound has an exact value for tiny inputs") {
  const AgentBound b = agent_bound(Formula::top());
  CHECK(b.sf_size == 2);
  CHECK(b.q == 0);
  // 3 * 2^(8 + 16)
  REQUIRE(b.exact().has_value());
  CHECK(*b.exact() == boost::multiprecision::cpp_int(3) << 24);
}
