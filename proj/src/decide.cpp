#include "tml/decide.hpp"

#include <algorithm>
#include <functional>
#include <future>
#include <memory>
#include <set>
#include <sstream>
#include <stdexcept>

#include "tml/error.hpp"
#include "tml/normalform.hpp"
#include "tml/semantics.hpp"
#include "tml/translate.hpp"

namespace tml {

// --------------------------------------------------------------------------
// GroundFormula

GroundFormula::GroundFormula() {
  nodes_.push_back({Op::False, -1, {}});
  nodes_.push_back({Op::True, -1, {}});
}

int GroundFormula::intern(Node n) {
  auto key = std::make_pair(n.op, std::make_pair(n.arg, n.kids));
  auto [it, fresh] = node_ix_.emplace(std::move(key), static_cast<int>(nodes_.size()));
  if (fresh) nodes_.push_back(std::move(n));
  return it->second;
}

int GroundFormula::atom(const std::string& predicate, const std::vector<int>& agents) {
  auto [it, fresh] = atom_ix_.emplace(std::make_pair(predicate, agents), static_cast<int>(atoms_.size()));
  if (fresh) atoms_.push_back({predicate, agents});
  return it->second;
}

int GroundFormula::literal(int atom, bool positive) { return intern({positive ? Op::Lit : Op::NegLit, atom, {}}); }

namespace {

// Shared body of conj/disj: absorbing unit, neutral unit, flattening,
// dedupe and complementary literals.
template <class Self>
int junction(Self& self, GroundFormula::Op op, std::vector<int> kids, int absorbing, int neutral,
             const std::function<int(GroundFormula::Node)>& intern) {
  std::vector<int> flat;
  for (int k : kids) {
    if (k == absorbing) return absorbing;
    if (k == neutral) continue;
    const auto& n = self.node(k);
    if (n.op == op)
      flat.insert(flat.end(), n.kids.begin(), n.kids.end());
    else
      flat.push_back(k);
  }
  std::sort(flat.begin(), flat.end());
  flat.erase(std::unique(flat.begin(), flat.end()), flat.end());
  std::set<std::pair<int, bool>> lits;
  for (int k : flat) {
    const auto& n = self.node(k);
    if (n.op == GroundFormula::Op::Lit || n.op == GroundFormula::Op::NegLit) {
      const bool pos = n.op == GroundFormula::Op::Lit;
      if (lits.contains({n.arg, !pos})) return absorbing;
      lits.emplace(n.arg, pos);
    }
  }
  if (flat.empty()) return neutral;
  if (flat.size() == 1) return flat.front();
  return intern({op, -1, std::move(flat)});
}

}  // namespace

int GroundFormula::conj(std::vector<int> kids) {
  return junction(*this, Op::And, std::move(kids), 0, 1, [this](Node n) { return intern(std::move(n)); });
}

int GroundFormula::disj(std::vector<int> kids) {
  return junction(*this, Op::Or, std::move(kids), 1, 0, [this](Node n) { return intern(std::move(n)); });
}

int GroundFormula::box(int agent, int kid) {
  if (kid == 1) return 1;
  return intern({Op::Box, agent, {kid}});
}

int GroundFormula::dia(int agent, int kid) {
  if (kid == 0) return 0;
  return intern({Op::Dia, agent, {kid}});
}

std::string GroundFormula::atom_name(int id) const {
  const auto& a = ground_atom(id);
  std::string s = a.predicate + "@";
  for (std::size_t i = 0; i < a.agents.size(); ++i) {
    if (i) s += ",";
    s += agent_name(a.agents[i]);
  }
  return s;
}

int GroundFormula::modal_depth(int id) const {
  std::vector<int> memo(nodes_.size(), -1);
  std::function<int(int)> go = [&](int i) -> int {
    int& m = memo[static_cast<std::size_t>(i)];
    if (m >= 0) return m;
    const Node& n = node(i);
    int d = 0;
    for (int k : n.kids) d = std::max(d, go(k));
    if (n.op == Op::Box || n.op == Op::Dia) ++d;
    return m = d;
  };
  return go(id);
}

std::string GroundFormula::render(int id) const {
  const Node& n = node(id);
  switch (n.op) {
    case Op::False: return "false";
    case Op::True: return "true";
    case Op::Lit: return atom_name(n.arg);
    case Op::NegLit: return "!" + atom_name(n.arg);
    case Op::Box: return "[" + agent_name(n.arg) + "] " + render(n.kids[0]);
    case Op::Dia: return "<" + agent_name(n.arg) + "> " + render(n.kids[0]);
    case Op::And:
    case Op::Or: {
      std::string s = "(";
      for (std::size_t i = 0; i < n.kids.size(); ++i) {
        if (i) s += n.op == Op::And ? " & " : " | ";
        s += render(n.kids[i]);
      }
      return s + ")";
    }
  }
  return "?";
}

// --------------------------------------------------------------------------
// ground

namespace {

int ground_rec(GroundFormula& g, const Formula& f, std::map<Var, int>& env, int k) {
  auto agent_of = [&](const Var& v) {
    auto it = env.find(v);
    if (it == env.end()) throw UnboundVariable("variable " + v + " is free");
    return it->second;
  };
  auto over = [&](const Var& v, const Formula& body, bool all) {
    std::vector<int> parts;
    const auto saved = env.find(v) == env.end() ? std::optional<int>{} : std::optional<int>{env[v]};
    for (int d = 0; d < k; ++d) {
      env[v] = d;
      parts.push_back(ground_rec(g, body, env, k));
    }
    if (saved)
      env[v] = *saved;
    else
      env.erase(v);
    return all ? g.conj(std::move(parts)) : g.disj(std::move(parts));
  };
  switch (f.kind()) {
    case Kind::Top: return 1;
    case Kind::Bot: return 0;
    case Kind::Atom: {
      std::vector<int> ags;
      for (const auto& a : f.args()) ags.push_back(agent_of(a));
      return g.literal(g.atom(f.name(), ags), true);
    }
    case Kind::Not: {
      const Formula& a = f.child();
      if (!a.is(Kind::Atom)) {
        if (a.is(Kind::Top)) return 0;
        if (a.is(Kind::Bot)) return 1;
        throw Error("ground expects a formula in negation normal form");
      }
      std::vector<int> ags;
      for (const auto& v : a.args()) ags.push_back(agent_of(v));
      return g.literal(g.atom(a.name(), ags), false);
    }
    case Kind::And: return g.conj({ground_rec(g, f.lhs(), env, k), ground_rec(g, f.rhs(), env, k)});
    case Kind::Or: return g.disj({ground_rec(g, f.lhs(), env, k), ground_rec(g, f.rhs(), env, k)});
    case Kind::Forall: return over(f.name(), f.child(), true);
    case Kind::Exists: return over(f.name(), f.child(), false);
    case Kind::Box: return g.box(agent_of(f.name()), ground_rec(g, f.child(), env, k));
    case Kind::Dia: return g.dia(agent_of(f.name()), ground_rec(g, f.child(), env, k));
  }
  throw std::logic_error("unknown formula kind");
}

}  // namespace

GroundFormula ground(const Formula& f, const std::vector<std::string>& agents) {
  if (agents.empty()) throw EmptyDomain("grounding needs at least one agent");
  GroundFormula g;
  g.set_agents(agents);
  std::map<Var, int> env;
  g.set_root(ground_rec(g, f, env, static_cast<int>(agents.size())));
  return g;
}

// --------------------------------------------------------------------------
// mm_sat: world-by-world tableau for multimodal K

namespace {

struct TNode {
  std::vector<int> true_atoms;
  std::vector<std::pair<int, std::shared_ptr<const TNode>>> kids;
};

class Tableau {
 public:
  Tableau(const GroundFormula& g, int depth, std::size_t budget) : g_(g), depth_(depth), budget_(budget) {}

  std::shared_ptr<const TNode> world(std::vector<int> set, int level) {
    std::sort(set.begin(), set.end());
    set.erase(std::unique(set.begin(), set.end()), set.end());
    const auto key = std::make_pair(level, set);
    if (auto it = sat_.find(key); it != sat_.end()) return it->second;
    if (unsat_.contains(key)) return nullptr;
    tick();
    Branch b;
    b.assign.assign(g_.num_atoms(), 0);
    b.todo = set;
    auto r = expand(std::move(b), level);
    if (r)
      sat_.emplace(key, r);
    else
      unsat_.insert(key);
    return r;
  }

 private:
  using Op = GroundFormula::Op;

  struct Branch {
    std::vector<signed char> assign;  // atom -> -1/0/+1
    std::vector<int> todo;
    std::vector<int> ors;
    std::map<int, std::vector<int>> boxes;
    std::vector<std::pair<int, int>> dias;
    std::set<int> seen;
  };

  void tick() {
    if (++steps_ > budget_) throw ResourceLimit("tableau");
  }

  bool satisfied(const Branch& b, int id) const {
    const auto& n = g_.node(id);
    if (n.op == Op::True) return true;
    if (n.op == Op::Lit) return b.assign[static_cast<std::size_t>(n.arg)] > 0;
    if (n.op == Op::NegLit) return b.assign[static_cast<std::size_t>(n.arg)] < 0;
    return b.seen.contains(id);
  }

  bool refuted(const Branch& b, int id) const {
    const auto& n = g_.node(id);
    if (n.op == Op::False) return true;
    if (n.op == Op::Lit) return b.assign[static_cast<std::size_t>(n.arg)] < 0;
    if (n.op == Op::NegLit) return b.assign[static_cast<std::size_t>(n.arg)] > 0;
    return false;
  }

  std::shared_ptr<const TNode> expand(Branch b, int level) {
    while (!b.todo.empty()) {
      const int id = b.todo.back();
      b.todo.pop_back();
      if (!b.seen.insert(id).second) continue;
      const auto& n = g_.node(id);
      switch (n.op) {
        case Op::False: return nullptr;
        case Op::True: break;
        case Op::Lit:
        case Op::NegLit: {
          signed char& v = b.assign[static_cast<std::size_t>(n.arg)];
          const signed char want = n.op == Op::Lit ? 1 : -1;
          if (v == -want) return nullptr;
          v = want;
          break;
        }
        case Op::And: b.todo.insert(b.todo.end(), n.kids.begin(), n.kids.end()); break;
        case Op::Or: b.ors.push_back(id); break;
        case Op::Box: b.boxes[n.arg].push_back(n.kids[0]); break;
        case Op::Dia: b.dias.emplace_back(n.arg, n.kids[0]); break;
      }
    }
    // Pick an open disjunction, preferring the one with fewest live choices.
    int pick = -1;
    std::vector<int> choices;
    for (int o : b.ors) {
      const auto& kids = g_.node(o).kids;
      if (std::any_of(kids.begin(), kids.end(), [&](int k) { return satisfied(b, k); })) continue;
      std::vector<int> live;
      for (int k : kids)
        if (!refuted(b, k)) live.push_back(k);
      if (live.empty()) return nullptr;
      if (pick < 0 || live.size() < choices.size()) {
        pick = o;
        choices = std::move(live);
        if (choices.size() == 1) break;
      }
    }
    if (pick >= 0) {
      for (std::size_t i = 0; i < choices.size(); ++i) {
        tick();
        Branch c = i + 1 < choices.size() ? b : std::move(b);
        c.todo.push_back(choices[i]);
        if (auto r = expand(std::move(c), level)) return r;
      }
      return nullptr;
    }
    // Modal step.
    auto node = std::make_shared<TNode>();
    for (std::size_t a = 0; a < b.assign.size(); ++a)
      if (b.assign[a] > 0) node->true_atoms.push_back(static_cast<int>(a));
    if (!b.dias.empty() && level >= depth_) return nullptr;
    std::sort(b.dias.begin(), b.dias.end());
    for (const auto& [agent, phi] : b.dias) {
      std::vector<int> next{phi};
      if (auto it = b.boxes.find(agent); it != b.boxes.end()) next.insert(next.end(), it->second.begin(), it->second.end());
      auto kid = world(std::move(next), level + 1);
      if (!kid) return nullptr;
      node->kids.emplace_back(agent, std::move(kid));
    }
    return node;
  }

  const GroundFormula& g_;
  int depth_;
  std::size_t budget_;
  std::size_t steps_ = 0;
  std::map<std::pair<int, std::vector<int>>, std::shared_ptr<const TNode>> sat_;
  std::set<std::pair<int, std::vector<int>>> unsat_;
};

void materialize(const GroundFormula& g, const TNode& t, KripkeModel& m, int& counter, int parent, int agent) {
  const int w = m.add_world("w" + std::to_string(counter++));
  for (std::size_t a = 0; a < g.num_agents(); ++a) m.add_live(w, static_cast<int>(a));
  for (int at : t.true_atoms) {
    const auto& ga = g.ground_atom(at);
    m.set_true(w, ga.predicate, ga.agents);
  }
  if (parent >= 0) m.add_edge(parent, agent, w);
  for (const auto& [a, kid] : t.kids) materialize(g, *kid, m, counter, w, a);
}

}  // namespace

std::optional<TreeModel> mm_sat(const GroundFormula& g, int depth, std::size_t budget) {
  Tableau tab(g, depth, budget);
  auto r = tab.world({g.root()}, 0);
  if (!r) return std::nullopt;
  KripkeModel m;
  for (std::size_t a = 0; a < g.num_agents(); ++a) m.add_agent(g.agent_name(static_cast<int>(a)));
  int counter = 0;
  materialize(g, *r, m, counter, -1, -1);
  return as_tree(m, 0);
}

// --------------------------------------------------------------------------
// solve

const char* SatResult::status_name(Status s) {
  switch (s) {
    case Status::Sat: return "sat";
    case Status::Unsat: return "unsat";
    case Status::UnsatUpTo: return "unsat_up_to";
    case Status::ResourceLimit: return "resource_limit";
  }
  return "?";
}

namespace {

void require_two_variable_sentence(const Formula& f) {
  if (!is_sentence(f)) throw NotASentence("solve expects a sentence");
  for (const auto& v : variables(f))
    if (v != "x" && v != "y") throw VariableLimitExceeded("variable " + v + " is not x or y");
}

// Increasing-agent model read off a constant-domain witness: delta(w) is
// where E holds, edges through non-live agents are dropped.
TreeModel certificate(const TreeModel& t, const Formula& f, const FreshNames& names) {
  const KripkeModel& m = t.model;
  auto live = [&](int w) {
    std::set<int> d;
    auto it = m.valuation(w).find(names.existence);
    if (it != m.valuation(w).end())
      for (const auto& tuple : it->second) d.insert(tuple.at(0));
    return d;
  };
  KripkeModel out;
  std::map<int, int> used_agent;
  auto agent = [&](int a) {
    auto [it, fresh] = used_agent.emplace(a, 0);
    if (fresh) it->second = out.add_agent(m.agent_name(a));
    return it->second;
  };
  std::function<int(int)> copy = [&](int w) -> int {
    const int y = out.add_world(m.world_name(w));
    const std::set<int> d = live(w);
    for (int a : d) out.add_live(y, agent(a));
    for (const auto& [p, tuples] : m.valuation(w)) {
      if (p == names.existence) continue;
      for (const auto& tuple : tuples) {
        if (!std::all_of(tuple.begin(), tuple.end(), [&](int a) { return d.contains(a); })) continue;
        AgentTuple mapped;
        for (int a : tuple) mapped.push_back(agent(a));
        out.set_true(y, p, std::move(mapped));
      }
    }
    for (const auto& [a, v] : m.out(w))
      if (d.contains(a)) out.add_edge(y, agent(a), copy(v));
    return y;
  };
  const int root = copy(t.root);
  TreeModel cert = as_tree(out, root);
  const auto problems = validate(cert.model);
  if (!problems.empty()) throw std::logic_error("certificate is malformed: " + problems.front());
  if (!check_sentence(cert.model, cert.root, f)) throw std::logic_error("certificate does not satisfy the input");
  return cert;
}

struct Attempt {
  std::optional<TreeModel> model;
  bool limit = false;
};

Attempt try_k(const Formula& constant, std::size_t k, int depth, std::size_t budget) {
  std::vector<std::string> agents;
  for (std::size_t i = 0; i < k; ++i) agents.push_back("a" + std::to_string(i));
  try {
    return {mm_sat(ground(constant, agents), depth, budget), false};
  } catch (const ResourceLimit&) {
    return {std::nullopt, true};
  }
}

}  // namespace

SatResult solve(const Formula& f, const SolverConfig& cfg) {
  if (cfg.max_agents && *cfg.max_agents == 0) throw Error("max_agents must be at least 1");
  const Formula nf = to_nnf(f);
  require_two_variable_sentence(nf);
  const FreshNames names;
  check_fresh(nf, names);

  SatResult res;
  try {
    const Formula theta = to_fsnf(tr2_full(nf, names), names, {cfg.normalize_budget, false});
    res.bound = agent_bound(theta);
  } catch (const ResourceLimit&) {
    res.bound.reset();
  }

  const Formula constant = to_constant_domain(nf, names);
  const int depth = modal_depth(constant);

  // Quantifier-free sentences are propositional: the agent set is irrelevant.
  if (!has_quantifier(nf)) {
    Attempt a = try_k(constant, 1, depth, cfg.node_budget);
    res.k = 1;
    if (a.limit) {
      res.status = SatResult::Status::ResourceLimit;
      res.stage = "tableau";
    } else if (a.model) {
      res.status = SatResult::Status::Sat;
      if (cfg.emit_certificate) res.certificate = certificate(*a.model, nf, names);
    } else {
      res.status = SatResult::Status::Unsat;
    }
    return res;
  }

  // Upper end of the k loop.  std::nullopt means "no finite limit known".
  std::optional<std::size_t> limit = cfg.max_agents;
  bool reaches_bound = false;
  if (res.bound) {
    if (auto b = res.bound->exact(); b && (!limit || *b <= *limit)) {
      limit = static_cast<std::size_t>(*b);
      reaches_bound = true;
    }
  }
  if (!limit) {
    res.status = SatResult::Status::ResourceLimit;
    res.stage = res.bound ? "bound" : "normalize";
    return res;
  }

  const std::size_t width = std::max<std::size_t>(cfg.parallel_width, 1);
  for (std::size_t lo = 1; lo <= *limit; lo += width) {
    const std::size_t hi = std::min(*limit, lo + width - 1);
    std::vector<Attempt> results;
    if (width == 1) {
      results.push_back(try_k(constant, lo, depth, cfg.node_budget));
    } else {
      std::vector<std::future<Attempt>> jobs;
      for (std::size_t k = lo; k <= hi; ++k)
        jobs.push_back(std::async(std::launch::async, try_k, std::cref(constant), k, depth, cfg.node_budget));
      for (auto& j : jobs) results.push_back(j.get());
    }
    for (std::size_t i = 0; i < results.size(); ++i) {
      const std::size_t k = lo + i;
      res.k = k;
      if (results[i].limit) {
        res.status = SatResult::Status::ResourceLimit;
        res.stage = "tableau";
        return res;
      }
      if (results[i].model) {
        res.status = SatResult::Status::Sat;
        if (cfg.emit_certificate) res.certificate = certificate(*results[i].model, nf, names);
        return res;
      }
    }
  }
  res.k = *limit;
  if (reaches_bound) {
    res.status = SatResult::Status::Unsat;
  } else if (!res.bound) {
    res.status = SatResult::Status::ResourceLimit;
    res.stage = "normalize";
  } else {
    res.status = SatResult::Status::UnsatUpTo;
  }
  return res;
}

BoundReport theoretical_bound_report(const Formula& f, std::size_t normalize_budget) {
  const Formula nf = to_nnf(f);
  require_two_variable_sentence(nf);
  const FreshNames names;
  check_fresh(nf, names);
  BoundReport r;
  r.input_size = nf.size();
  r.constant_size = to_constant_domain(nf, names).size();
  const Formula psi = tr2_full(nf, names);
  r.ptml_size = psi.size();
  const Formula theta = to_fsnf(psi, names, {normalize_budget, false});
  r.fsnf_size = theta.size();
  r.bound = agent_bound(theta);
  return r;
}

}  // namespace tml
