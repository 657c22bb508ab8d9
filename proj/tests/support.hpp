// Shared helpers for the test suites: random sentences, random tree models,
// fixtures.

#pragma once

#include <algorithm>
#include <fstream>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "tml/formula.hpp"
#include "tml/model.hpp"
#include "tml/model_io.hpp"
#include "tml/parser.hpp"

namespace tmltest {

using tml::Formula;
using Rng = std::mt19937_64;

#ifndef TML_FIXTURES
#define TML_FIXTURES "tests/fixtures"
#endif

inline std::string fixture_path(const std::string& name) { return std::string(TML_FIXTURES) + "/" + name; }

inline std::string read_text(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline const char* kTheta = "forall x. [x][x] false & forall x. exists y. [x](<y> !p & exists y. <y> p)";

inline Formula theta() { return tml::parse_formula(kTheta); }

struct GenOptions {
  int max_md = 2;
  int max_modules = 6;
  double and_bias = 0.7;  // share of conjunctions among binary nodes
  std::vector<std::pair<std::string, int>> preds{{"p", 0}, {"P", 1}};
};

inline int uniform(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }
inline bool coin(Rng& rng, double p = 0.5) { return std::bernoulli_distribution(p)(rng); }

namespace detail {

inline Formula leaf(Rng& rng, const GenOptions& o, const std::vector<std::string>& bound) {
  std::vector<std::pair<std::string, int>> usable;
  for (const auto& pr : o.preds)
    if (pr.second == 0 || !bound.empty()) usable.push_back(pr);
  if (usable.empty() || coin(rng, 0.05)) return coin(rng) ? Formula::top() : Formula::bot();
  const auto& [name, arity] = usable[static_cast<std::size_t>(uniform(rng, 0, static_cast<int>(usable.size()) - 1))];
  std::vector<std::string> args;
  for (int i = 0; i < arity; ++i) args.push_back(bound[static_cast<std::size_t>(uniform(rng, 0, static_cast<int>(bound.size()) - 1))]);
  Formula a = Formula::atom(name, args);
  return coin(rng) ? a : Formula::neg(a);
}

inline Formula gen(Rng& rng, const GenOptions& o, int md, int modules, std::vector<std::string> bound) {
  const bool can_modal = md > 0 && !bound.empty();
  const int r = uniform(rng, 0, 99);
  if (modules <= 1 && (!can_modal || r < 50)) {
    if (bound.size() < 2 && r % 3 == 0) {
      const std::string v = coin(rng) ? "x" : "y";
      if (std::find(bound.begin(), bound.end(), v) == bound.end()) bound.push_back(v);
      const Formula body = leaf(rng, o, bound);
      return coin(rng) ? Formula::forall(v, body) : Formula::exists(v, body);
    }
    return leaf(rng, o, bound);
  }
  if (r < 30 && modules >= 2) {
    const int left = uniform(rng, 1, modules - 1);
    Formula a = gen(rng, o, md, left, bound);
    Formula b = gen(rng, o, md, modules - left, bound);
    return coin(rng, o.and_bias) ? Formula::conj(a, b) : Formula::disj(a, b);
  }
  if (r < 60) {
    const std::string v = coin(rng) ? "x" : "y";
    std::vector<std::string> inner = bound;
    if (std::find(inner.begin(), inner.end(), v) == inner.end()) inner.push_back(v);
    Formula body = gen(rng, o, md, modules, inner);
    return coin(rng) ? Formula::forall(v, body) : Formula::exists(v, body);
  }
  if (r < 90 && can_modal) {
    const std::string v = bound[static_cast<std::size_t>(uniform(rng, 0, static_cast<int>(bound.size()) - 1))];
    Formula body = gen(rng, o, md - 1, std::max(1, modules - 1), bound);
    return coin(rng) ? Formula::box(v, body) : Formula::dia(v, body);
  }
  if (r < 95) return Formula::neg(gen(rng, o, md, modules, bound));
  return leaf(rng, o, bound);
}

}  // namespace detail

/// Random two-variable sentence over o.preds.
inline Formula random_sentence(Rng& rng, const GenOptions& o = {}) {
  return detail::gen(rng, o, o.max_md, uniform(rng, 1, o.max_modules), {});
}

/// Random PTML sentence: only arity-0 predicates.
inline Formula random_ptml(Rng& rng, GenOptions o = {}) {
  o.preds = {{"p", 0}, {"s", 0}};
  return random_sentence(rng, o);
}

struct ModelOptions {
  int agents = 3;
  int max_children = 2;
  int depth = 2;
  std::vector<std::pair<std::string, int>> preds{{"p", 0}, {"P", 1}};
};

/// Random increasing-agent tree model; worlds are named w0, w1, ... in
/// creation order and agents d0, d1, ...
inline tml::TreeModel random_tree(Rng& rng, const ModelOptions& o = {}) {
  tml::KripkeModel m;
  for (int a = 0; a < o.agents; ++a) m.add_agent("d" + std::to_string(a));
  int counter = 0;
  auto fill = [&](int w, const std::set<int>& live) {
    for (int a : live) m.add_live(w, a);
    const std::vector<int> ag(live.begin(), live.end());
    for (const auto& [name, arity] : o.preds) {
      if (arity == 0) {
        if (coin(rng)) m.set_true(w, name, {});
      } else if (arity == 1) {
        for (int a : ag)
          if (coin(rng)) m.set_true(w, name, {a});
      } else {
        for (int a : ag)
          for (int b : ag)
            if (coin(rng, 0.4)) m.set_true(w, name, {a, b});
      }
    }
  };
  std::function<void(int, const std::set<int>&, int)> grow = [&](int w, const std::set<int>& live, int level) {
    if (level >= o.depth) return;
    const int kids = uniform(rng, 0, o.max_children);
    for (int i = 0; i < kids; ++i) {
      std::set<int> next = live;
      for (int a = 0; a < o.agents; ++a)
        if (coin(rng, 0.3)) next.insert(a);
      const std::vector<int> ag(live.begin(), live.end());
      const int label = ag[static_cast<std::size_t>(uniform(rng, 0, static_cast<int>(ag.size()) - 1))];
      const int v = m.add_world("w" + std::to_string(counter++));
      fill(v, next);
      m.add_edge(w, label, v);
      grow(v, next, level + 1);
    }
  };
  std::set<int> root_live;
  for (int a = 0; a < o.agents; ++a)
    if (coin(rng)) root_live.insert(a);
  if (root_live.empty()) root_live.insert(uniform(rng, 0, o.agents - 1));
  const int root = m.add_world("w" + std::to_string(counter++));
  fill(root, root_live);
  grow(root, root_live, 0);
  m.set_root(root);
  return tml::as_tree(m, root);
}

}  // namespace tmltest
