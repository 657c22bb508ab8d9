// Acceptance run: one PASS/FAIL line per criterion, plus a few informational
// lines.  Exit status is non-zero if any criterion fails.

#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>

#include "support.hpp"
#include "tml/closure.hpp"
#include "tml/decide.hpp"
#include "tml/error.hpp"
#include "tml/model_io.hpp"
#include "tml/normalform.hpp"
#include "tml/semantics.hpp"
#include "tml/translate.hpp"
#include "tml/types.hpp"

using namespace tml;
using tmltest::Rng;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

int failures = 0;

void report(int id, bool ok, const std::string& detail, double secs) {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(2);
  os << (ok ? "PASS" : "FAIL") << " criterion " << id << ": " << detail << " (" << secs << " s)";
  std::cout << os.str() << std::endl;
  if (!ok) ++failures;
}

void info(const std::string& s) { std::cout << "  info: " << s << std::endl; }

TreeModel fixture(const std::string& name) {
  const KripkeModel m = load_model(tmltest::fixture_path(name));
  return as_tree(m, m.world("r"));
}

// Number of worlds of a witness on which the marker proposition holds.
std::size_t marked_worlds(const KripkeModel& m, const std::string& marker) {
  std::size_t n = 0;
  for (int w = 0; w < static_cast<int>(m.num_worlds()); ++w)
    if (m.holds(w, marker, {})) ++n;
  return n;
}

// Oracle status of f at `worlds`, falling back to the real-world count of a
// translated witness when the translated side found a model the small bound
// misses.
struct Status {
  bool sat = false;
  bool limit = false;
};

constexpr std::size_t kOracleBudget = 50'000'000;

OracleOptions big(bool constant = false) {
  OracleOptions o;
  o.budget = kOracleBudget;
  o.constant_domain = constant;
  return o;
}

Status oracle_status(const Formula& f, std::size_t worlds, std::size_t agents, int depth, const OracleOptions& opt = big()) {
  try {
    return {oracle_sat(f, worlds, agents, depth, opt).has_value(), false};
  } catch (const ResourceLimit&) {
    return {false, true};
  }
}

// ---------------------------------------------------------------------------
// 1

void criterion1() {
  const auto t0 = Clock::now();
  const TreeModel t = fixture("worked_example.json");
  const bool v = check_sentence(t.model, t.root, tmltest::theta());
  const double secs = seconds_since(t0);
  const TreeModel lit = fixture("worked_example_literal.json");
  info("literal truncation with edge (w1,4,v1) evaluates to " +
       std::string(check_sentence(lit.model, lit.root, tmltest::theta()) ? "true" : "false"));
  report(1, v && secs < 1.0, std::string("M,r |= theta is ") + (v ? "true" : "false"), secs);
}

// ---------------------------------------------------------------------------
// 2

// 1-type count computed directly from check, independent of types.cpp.
std::size_t independent_type_count(const TreeModel& t, int w, const Formula& theta) {
  const SubformulaClosure sf(theta);
  const auto& slice = sf.slice(t.depth[static_cast<std::size_t>(w)]);
  auto row = [&](int c, int d) {
    std::vector<bool> r;
    for (const auto& g : slice) {
      r.push_back(check(t.model, w, {{"x", c}, {"y", d}}, g));
      r.push_back(check(t.model, w, {{"x", d}, {"y", c}}, g));
    }
    return r;
  };
  std::set<std::vector<std::vector<bool>>> types;
  for (int c : t.model.delta(w)) {
    std::vector<std::vector<bool>> sig{row(c, c)};
    if (t.parent[static_cast<std::size_t>(w)] >= 0) sig.push_back(row(c, t.in_agent[static_cast<std::size_t>(w)]));
    std::set<std::vector<bool>> all;
    for (int d : t.model.delta(w)) all.insert(row(c, d));
    sig.insert(sig.end(), all.begin(), all.end());
    types.insert(sig);
  }
  return types.size();
}

void criterion2() {
  const auto t0 = Clock::now();
  const TreeModel t = fixture("worked_example.json");
  const Formula theta = tmltest::theta();
  const std::size_t types_r = independent_type_count(t, t.model.world("r"), theta);
  const std::size_t types_w = independent_type_count(t, t.model.world("w0"), theta);
  const SubformulaClosure sf(theta);
  std::set<OneType> lib_r, lib_w;
  for (int c : t.model.delta(t.model.world("r"))) lib_r.insert(one_type(t, t.model.world("r"), c, sf));
  for (int c : t.model.delta(t.model.world("w0"))) lib_w.insert(one_type(t, t.model.world("w0"), c, sf));
  const bool types_ok = types_r == 1 && types_w == 3 && lib_r.size() == types_r && lib_w.size() == types_w;

  const CompressResult r = compress(t, theta);
  const std::size_t q = std::max<std::size_t>(r.q, 1);
  bool sizes_ok = r.q == 2 && r.census.front().world == "r" && r.census.front().type_agents == types_r * q * 3 &&
                  r.census.front().type_agents == 6;
  std::size_t w_level = 0, w_live = 0;
  for (const auto& c : r.census)
    if (c.source == "w0" || c.source == "w1") {
      sizes_ok = sizes_ok && c.type_agents == types_w * q * 3 && c.type_agents == 18;
      w_level = c.type_agents;
      w_live = c.live_agents;
    }
  sizes_ok = sizes_ok && w_level == 18;
  const bool valid = validate(r.model.model).empty();
  const bool holds = check_sentence(r.model.model, r.model.root, theta);
  const double secs = seconds_since(t0);
  info("1-types: r=" + std::to_string(types_r) + " w0=" + std::to_string(types_w) + "; compressed model has " +
       std::to_string(r.model.model.num_worlds()) + " worlds, " + std::to_string(r.model.model.num_agents()) +
       " agents; w-level live set " + std::to_string(w_live) + " (own 18 plus inherited root agents)");
  std::ostringstream d;
  d << "q=" << r.q << ", root domain " << r.census.front().type_agents << ", w-level domain " << w_level
    << ", theta at compressed root " << (holds ? "true" : "false");
  report(2, types_ok && sizes_ok && valid && holds && secs < 10.0, d.str(), secs);
}

// ---------------------------------------------------------------------------
// 3

struct Tally {
  int total = 0, discrepancies = 0, limits = 0, sat = 0;
  std::string first;
};

void criterion3() {
  const auto t0 = Clock::now();
  Rng rng(2024);
  const std::vector<std::pair<std::string, int>> pool{{"p", 0}, {"P", 1}, {"R", 2}};
  const OracleOptions cd = big(true);
  const std::size_t W = 4, A = 3;
  Tally t1, t2;
  int literal_gamma_diff = 0;
  const int N = 500;
  for (int i = 0; i < N; ++i) {
    tmltest::GenOptions g;
    g.preds.clear();
    const int k = tmltest::uniform(rng, 1, 2);
    std::vector<int> ix{0, 1, 2};
    std::shuffle(ix.begin(), ix.end(), rng);
    for (int j = 0; j < k; ++j) g.preds.push_back(pool[static_cast<std::size_t>(ix[static_cast<std::size_t>(j)])]);
    const Formula f = to_nnf(tmltest::random_sentence(rng, g));
    const int md = modal_depth(f);
    int max_arity = 0;
    for (const auto& [name, a] : signature(f)) max_arity = std::max(max_arity, static_cast<int>(a));

    const Status base = oracle_status(f, W, A, md);
    if (base.limit) {
      ++t1.limits;
      ++t2.limits;
      continue;
    }
    t1.sat += base.sat;

    // Constant-domain translation: same worlds and agents.
    const Status c = oracle_status(to_constant_domain(f), W, A, md, cd);
    ++t1.total;
    if (c.limit) {
      ++t1.limits;
    } else if (c.sat != base.sat) {
      if (!t1.discrepancies++) t1.first = render_formula(f);
    }
    const Status lit = oracle_status(conj_all({gamma(f), tr1(f)}), W, A, md, cd);
    if (!lit.limit && lit.sat != base.sat) ++literal_gamma_diff;

    // Propositional translation: each real world gains one auxiliary world per agent tuple of
    // length 1..max arity.
    std::size_t per_world = 1, tuples = 1;
    for (int a = 1; a <= max_arity; ++a) per_world += (tuples *= A);
    const Formula tf = tr2_full(f);
    ++t2.total;
    try {
      const auto w2 = oracle_sat(tf, W * per_world, A, md + max_arity, big());
      bool agree = w2.has_value() == base.sat;
      if (w2 && !base.sat) {
        // the witness may use more real worlds than the pre-translation bound
        const std::size_t real = marked_worlds(w2->model, FreshNames{}.real);
        const Status again = oracle_status(f, std::max(real, W), A, md);
        agree = !again.limit && again.sat;
      }
      if (!agree && !t2.discrepancies++) t2.first = render_formula(f);
    } catch (const ResourceLimit&) {
      ++t2.limits;
    }
  }
  const double secs = seconds_since(t0);
  info("constant-domain: " + std::to_string(t1.total) + " compared, " + std::to_string(t1.sat) + " satisfiable, " +
       std::to_string(t1.limits) + " oracle limits; literal gamma & tr1 (no exists x E(x)) differs on " +
       std::to_string(literal_gamma_diff));
  info("propositional: " + std::to_string(t2.total) + " compared, " + std::to_string(t2.limits) + " oracle limits");
  if (t1.discrepancies) info("first constant-domain discrepancy: " + t1.first);
  if (t2.discrepancies) info("first propositional discrepancy: " + t2.first);
  const bool ok = t1.discrepancies == 0 && t2.discrepancies == 0 && t1.total >= 500 && t2.total >= 500 &&
                  t1.limits == 0 && t2.limits == 0 && secs < 600;
  report(3, ok,
         std::to_string(N) + " sentences, " + std::to_string(t1.discrepancies + t2.discrepancies) + " discrepancies",
         secs);
}

// ---------------------------------------------------------------------------
// 4

void criterion4() {
  const auto t0 = Clock::now();
  Rng rng(4242);
  const std::size_t W = 4, A = 3;
  int total = 0, shape_bad = 0, disc = 0, limits = 0, sat = 0;
  std::string first;
  const FreshNames names;
  for (int i = 0; i < 300; ++i) {
    const Formula f = to_nnf(tmltest::random_ptml(rng));
    ++total;
    Formula t;
    try {
      t = to_fsnf(f, names);
    } catch (const ResourceLimit&) {
      ++limits;
      continue;
    }
    if (!is_fsnf_dnf(t) || !is_propositional_atoms(t) || !is_sentence(t)) {
      if (!shape_bad++ && first.empty()) first = "shape: " + render_formula(f);
      continue;
    }
    const int md = modal_depth(f);
    const Status base = oracle_status(f, W, A, md);
    if (base.limit) {
      ++limits;
      continue;
    }
    sat += base.sat;
    // fresh predicates W_i(o) cost one auxiliary world per agent each
    std::size_t fresh = 0;
    for (const auto& [name, a] : signature(t))
      if (FreshNames::is_intermediate(name)) ++fresh;
    const Formula tn = to_nnf(t);
    try {
      const auto w = oracle_sat(tn, W * (1 + A * fresh), A, modal_depth(tn), big());
      bool agree = w.has_value() == base.sat;
      if (w && !base.sat) {
        const std::size_t real = modal_depth(f) > 0 ? marked_worlds(w->model, names.marker) : 1;
        const Status again = oracle_status(f, std::max(real, W), A, md);
        agree = !again.limit && again.sat;
      }
      if (!agree && !disc++ && first.empty()) first = "status: " + render_formula(f);
    } catch (const ResourceLimit&) {
      ++limits;
    }
  }
  const double secs = seconds_since(t0);
  info(std::to_string(total) + " sentences, " + std::to_string(sat) + " satisfiable, " + std::to_string(limits) +
       " limits");
  if (!first.empty()) info("first problem: " + first);
  report(4, total >= 300 && shape_bad == 0 && disc == 0 && limits == 0 && secs < 600,
         std::to_string(shape_bad) + " shape failures, " + std::to_string(disc) + " status discrepancies", secs);
}

// ---------------------------------------------------------------------------
// 5

void criterion5() {
  const auto t0 = Clock::now();
  Rng rng(55);
  int total = 0, disc = 0;
  std::string first;
  tmltest::GenOptions g;
  g.preds = {{"p", 0}, {"s", 0}};  // extension is defined for propositional atoms
  tmltest::ModelOptions mo;
  mo.preds = {{"p", 0}, {"s", 0}, {"P", 1}};
  while (total < 500) {
    const TreeModel t = tmltest::random_tree(rng, mo);
    const int w = tmltest::uniform(rng, 0, static_cast<int>(t.model.num_worlds()) - 1);
    const std::vector<int> live(t.model.delta(w).begin(), t.model.delta(w).end());
    ExtensionMap ext;
    const int n = tmltest::uniform(rng, 1, 2);
    for (int c = 0; c < n; ++c) {
      const std::string name = "c" + std::to_string(c);
      ext.agents.push_back(name);
      ext.omega[name] =
          t.model.agent_name(live[static_cast<std::size_t>(tmltest::uniform(rng, 0, static_cast<int>(live.size()) - 1))]);
    }
    const TreeModel e = extend(t, w, ext);
    // formula with free variables among x, y
    const Formula phi = tmltest::detail::gen(rng, g, 2, tmltest::uniform(rng, 1, 6), {"x", "y"});
    // sigma over C and delta(w); sigma-hat replaces c by omega(c)
    std::vector<std::string> pool;
    for (int a : live) pool.push_back(t.model.agent_name(a));
    for (const auto& c : ext.agents) pool.push_back(c);
    Assignment sigma, hat;
    for (const auto& v : free_vars(phi)) {
      const std::string& a = pool[static_cast<std::size_t>(tmltest::uniform(rng, 0, static_cast<int>(pool.size()) - 1))];
      sigma[v] = e.model.agent(a);
      const auto it = ext.omega.find(a);
      hat[v] = t.model.agent(it == ext.omega.end() ? a : it->second);
    }
    ++total;
    // compare at w and at every world of its subtree
    bool agree = true;
    for (int u : t.subtree(w)) {
      const int ue = e.model.world(t.model.world_name(u));
      agree = agree && check(e.model, ue, sigma, phi) == check(t.model, u, hat, phi);
    }
    if (!agree && !disc++) first = render_formula(phi);
  }
  const double secs = seconds_since(t0);
  if (!first.empty()) info("first discrepancy: " + first);
  report(5, disc == 0 && secs < 300, std::to_string(total) + " instances, " + std::to_string(disc) + " discrepancies",
         secs);
}

// ---------------------------------------------------------------------------
// 6 and 7

void criteria6and7() {
  const auto t0 = Clock::now();
  Rng rng(6060);
  tmltest::GenOptions g;
  int total = 0, definite = 0, disc = 0, cert_bad = 0, sat = 0, limits = 0;
  std::vector<std::pair<Formula, std::size_t>> sats;
  std::string first;
  SolverConfig cfg;
  cfg.max_agents = 3;
  for (int i = 0; i < 300; ++i) {
    const Formula f = to_nnf(tmltest::random_sentence(rng, g));
    const int md = modal_depth(f);
    ++total;
    SatResult r;
    try {
      r = solve(f, cfg);
    } catch (const std::logic_error& e) {
      // certificate failed to verify
      ++cert_bad;
      if (first.empty()) first = std::string(e.what()) + ": " + render_formula(f);
      continue;
    }
    const Status o = oracle_status(f, 1000, 3, md);
    if (r.status == SatResult::Status::ResourceLimit || o.limit) {
      ++limits;
      continue;
    }
    ++definite;
    const bool s = r.status == SatResult::Status::Sat;
    if (s) {
      ++sat;
      sats.emplace_back(f, r.k);
      if (!r.certificate || !validate(r.certificate->model).empty() ||
          !check_sentence(r.certificate->model, r.certificate->root, f))
        ++cert_bad;
    }
    if (s != o.sat && !disc++ && first.empty()) first = render_formula(f);
  }
  const double secs6 = seconds_since(t0);
  info(std::to_string(total) + " sentences, " + std::to_string(definite) + " definite, " + std::to_string(sat) +
       " satisfiable, " + std::to_string(limits) + " limits");
  if (!first.empty()) info("first problem: " + first);
  report(6, total >= 300 && disc == 0 && cert_bad == 0 && limits == 0 && secs6 < 600,
         std::to_string(disc) + " discrepancies, " + std::to_string(cert_bad) + " bad certificates", secs6);

  const auto t1 = Clock::now();
  int violations = 0;
  for (const auto& [f, k] : sats) {
    std::vector<std::string> agents;
    for (std::size_t i = 0; i <= k; ++i) agents.push_back("a" + std::to_string(i));
    const Formula c = to_constant_domain(f);
    if (!mm_sat(ground(c, agents), modal_depth(c), 2'000'000)) ++violations;
  }
  report(7, violations == 0 && !sats.empty(),
         std::to_string(sats.size()) + " Sat results re-ground at k+1, " + std::to_string(violations) + " violations",
         seconds_since(t1));
}

// ---------------------------------------------------------------------------
// 8

// SF size by direct enumeration: subformulas, their single negations, true.
std::size_t hand_closure_size(const Formula& f) {
  std::set<Formula> sub;
  std::function<void(const Formula&)> walk = [&](const Formula& g) {
    sub.insert(g);
    for (std::size_t i = 0; i < g.num_children(); ++i) walk(g.child(i));
  };
  walk(f);
  sub.insert(Formula::top());
  std::set<Formula> all = sub;
  for (const auto& g : sub)
    if (!g.is(Kind::Not)) all.insert(Formula::neg(g));
  return all.size();
}

void criterion8() {
  const auto t0 = Clock::now();
  const Formula theta = tmltest::theta();
  const AgentBound b = agent_bound(theta);
  const std::size_t m = hand_closure_size(theta);
  // B = (2^(2m))_{lambda1} * (2^(2m))_{lambda2} * (2^(2^(2m)))_{lambda3} * q * 3
  const double hand = std::log2(3.0 * 2.0) + 2.0 * m + 2.0 * m + std::ldexp(1.0, static_cast<int>(2 * m));
  constexpr std::size_t kPinnedM = 28;  // regression pin for |SF(theta)|
  const bool ok = b.q == 2 && b.factor == 6 && b.sf_size == m && m == kPinnedM &&
                  std::abs(b.log2 - hand) <= 1e-9 * hand && !b.exact().has_value();
  std::ostringstream d;
  d << "q=" << b.q << ", |SF|=" << b.sf_size << ", B = " << b.describe() << ", log2 B = " << b.log2;
  report(8, ok, d.str(), seconds_since(t0));
}

}  // namespace

int main() {
  const std::vector<std::function<void()>> runs{criterion1, criterion2, criterion3, criterion4,
                                                criterion5, criteria6and7, criterion8};
  for (const auto& run : runs) {
    try {
      run();
    } catch (const std::exception& e) {
      std::cout << "FAIL criterion run aborted: " << e.what() << std::endl;
      ++failures;
    }
  }
  std::cout << (failures ? "acceptance: FAILED" : "acceptance: all criteria passed") << std::endl;
  return failures ? 1 : 0;
}
