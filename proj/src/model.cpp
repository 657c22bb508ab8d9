#include "tml/model.hpp"

#include <algorithm>
#include <functional>

#include "tml/error.hpp"

namespace tml {

int KripkeModel::add_world(const std::string& name) {
  auto [it, fresh] = world_ix_.emplace(name, static_cast<int>(worlds_.size()));
  if (fresh) {
    worlds_.push_back(name);
    delta_.emplace_back();
    out_.emplace_back();
    val_.emplace_back();
  }
  return it->second;
}

int KripkeModel::add_agent(const std::string& name) {
  auto [it, fresh] = agent_ix_.emplace(name, static_cast<int>(agents_.size()));
  if (fresh) agents_.push_back(name);
  return it->second;
}

void KripkeModel::add_live(int w, int agent) { delta_.at(static_cast<std::size_t>(w)).insert(agent); }

void KripkeModel::add_edge(int w, int agent, int v) {
  Edge e{w, agent, v};
  if (edge_set_.insert(e).second) {
    edges_.push_back(e);
    out_.at(static_cast<std::size_t>(w)).emplace_back(agent, v);
  }
}

void KripkeModel::set_true(int w, const std::string& predicate, AgentTuple tuple) {
  val_.at(static_cast<std::size_t>(w))[predicate].insert(std::move(tuple));
}

std::optional<int> KripkeModel::find_world(const std::string& name) const {
  auto it = world_ix_.find(name);
  if (it == world_ix_.end()) return std::nullopt;
  return it->second;
}

std::optional<int> KripkeModel::find_agent(const std::string& name) const {
  auto it = agent_ix_.find(name);
  if (it == agent_ix_.end()) return std::nullopt;
  return it->second;
}

int KripkeModel::world(const std::string& name) const {
  if (auto w = find_world(name)) return *w;
  throw UnknownWorld("unknown world '" + name + "'");
}

int KripkeModel::agent(const std::string& name) const {
  if (auto a = find_agent(name)) return *a;
  throw Error("unknown agent '" + name + "'");
}

bool KripkeModel::holds(int w, const std::string& predicate, const AgentTuple& tuple) const {
  const auto& v = valuation(w);
  auto it = v.find(predicate);
  return it != v.end() && it->second.contains(tuple);
}

std::vector<std::string> validate(const KripkeModel& m) {
  std::vector<std::string> report;
  for (int w = 0; w < static_cast<int>(m.num_worlds()); ++w) {
    if (m.delta(w).empty()) report.push_back("world " + m.world_name(w) + ": empty live-agent set");
    for (const auto& [pred, tuples] : m.valuation(w))
      for (const auto& t : tuples)
        for (int a : t)
          if (!m.delta(w).contains(a)) {
            report.push_back("world " + m.world_name(w) + ": " + pred + " holds of non-live agent " +
                             m.agent_name(a));
            break;
          }
  }
  std::map<std::string, std::size_t> arities;
  for (int w = 0; w < static_cast<int>(m.num_worlds()); ++w)
    for (const auto& [pred, tuples] : m.valuation(w))
      for (const auto& t : tuples) {
        auto [it, fresh] = arities.emplace(pred, t.size());
        if (!fresh && it->second != t.size()) {
          report.push_back("world " + m.world_name(w) + ": " + pred + " used with inconsistent arity");
          it->second = t.size();
        }
      }
  for (const auto& e : m.edges()) {
    const std::string name = "edge (" + m.world_name(e.from) + ", " + m.agent_name(e.agent) + ", " +
                             m.world_name(e.to) + ")";
    if (!m.delta(e.from).contains(e.agent)) report.push_back(name + ": agent not live at source");
    if (!std::includes(m.delta(e.to).begin(), m.delta(e.to).end(), m.delta(e.from).begin(),
                       m.delta(e.from).end()))
      report.push_back(name + ": live agents shrink along the edge");
  }
  return report;
}

int TreeModel::height(int w) const {
  if (w < 0 || w >= static_cast<int>(depth.size())) throw UnknownWorld("world index out of range");
  return depth[static_cast<std::size_t>(w)];
}

std::optional<std::pair<int, int>> TreeModel::incoming(int w) const {
  if (w < 0 || w >= static_cast<int>(parent.size())) throw UnknownWorld("world index out of range");
  if (parent[static_cast<std::size_t>(w)] < 0) return std::nullopt;
  return std::pair{parent[static_cast<std::size_t>(w)], in_agent[static_cast<std::size_t>(w)]};
}

std::vector<int> TreeModel::subtree(int w) const {
  std::vector<int> order, stack{w};
  while (!stack.empty()) {
    int x = stack.back();
    stack.pop_back();
    order.push_back(x);
    const auto& o = model.out(x);
    for (auto it = o.rbegin(); it != o.rend(); ++it) stack.push_back(it->second);
  }
  return order;
}

int TreeModel::max_height() const {
  int h = 0;
  for (int d : depth) h = std::max(h, d);
  return h;
}

TreeModel as_tree(const KripkeModel& m, int root) {
  const std::size_t n = m.num_worlds();
  TreeModel t;
  t.model = m;
  t.root = root;
  t.model.set_root(root);
  t.parent.assign(n, -1);
  t.in_agent.assign(n, -1);
  t.depth.assign(n, -1);
  for (const auto& e : m.edges()) {
    if (e.to == root || t.parent[static_cast<std::size_t>(e.to)] >= 0)
      throw ModelFormatError("not a tree: world " + m.world_name(e.to) + " has several parents");
    t.parent[static_cast<std::size_t>(e.to)] = e.from;
    t.in_agent[static_cast<std::size_t>(e.to)] = e.agent;
  }
  t.depth[static_cast<std::size_t>(root)] = 0;
  std::vector<int> stack{root};
  std::size_t seen = 0;
  while (!stack.empty()) {
    int x = stack.back();
    stack.pop_back();
    ++seen;
    for (const auto& [a, v] : m.out(x)) {
      t.depth[static_cast<std::size_t>(v)] = t.depth[static_cast<std::size_t>(x)] + 1;
      stack.push_back(v);
    }
  }
  if (seen != n) throw ModelFormatError("not a tree: some worlds are unreachable from the root");
  return t;
}

namespace {

void copy_world(const KripkeModel& src, int x, KripkeModel& dst, int y) {
  for (int a : src.delta(x)) dst.add_live(y, dst.add_agent(src.agent_name(a)));
  for (const auto& [pred, tuples] : src.valuation(x))
    for (const auto& t : tuples) {
      AgentTuple mapped;
      for (int a : t) mapped.push_back(dst.add_agent(src.agent_name(a)));
      dst.set_true(y, pred, std::move(mapped));
    }
}

}  // namespace

TreeModel tree_unravel(const KripkeModel& m, const std::string& root, int depth) {
  const int r = m.world(root);
  KripkeModel out;
  for (std::size_t a = 0; a < m.num_agents(); ++a) out.add_agent(m.agent_name(static_cast<int>(a)));
  std::function<void(int, int, const std::string&, int)> go = [&](int x, int y, const std::string& name,
                                                                   int d) {
    copy_world(m, x, out, y);
    if (d == depth) return;
    for (const auto& [a, v] : m.out(x)) {
      std::string child = name + ";" + m.agent_name(a) + ";" + m.world_name(v);
      int cy = out.add_world(child);
      out.add_edge(y, a, cy);
      go(v, cy, child, d + 1);
    }
  };
  int ry = out.add_world(root);
  go(r, ry, root, 0);
  return as_tree(out, ry);
}

TreeModel extend(const TreeModel& t, int w, const ExtensionMap& ext, std::vector<int>* origin) {
  const KripkeModel& m = t.model;
  if (w < 0 || w >= static_cast<int>(m.num_worlds())) throw UnknownWorld("world index out of range");
  for (const auto& c : ext.agents)
    if (m.find_agent(c)) throw AgentClash("agent '" + c + "' already exists");
  std::map<std::string, int> omega;  // c -> old agent index
  for (const auto& c : ext.agents) {
    auto it = ext.omega.find(c);
    if (it == ext.omega.end()) throw Error("no image for new agent '" + c + "'");
    int d = m.agent(it->second);
    if (!m.delta(w).contains(d)) throw AgentNotLive("image of '" + c + "' is not live at " + m.world_name(w));
    omega[c] = d;
  }

  KripkeModel out;
  for (std::size_t a = 0; a < m.num_agents(); ++a) out.add_agent(m.agent_name(static_cast<int>(a)));
  std::vector<int> cids;
  for (const auto& c : ext.agents) cids.push_back(out.add_agent(c));

  std::vector<int> src;  // output world -> input world
  std::vector<char> inside(m.num_worlds(), 0);
  for (int x : t.subtree(w)) inside[static_cast<std::size_t>(x)] = 1;

  using Rename = std::function<std::string(const std::string&)>;
  std::function<int(int, const Rename&)> build = [&](int x, const Rename& rn) -> int {
    const std::string name = rn(m.world_name(x));
    if (out.find_world(name)) throw ModelFormatError("extension produced duplicate world name '" + name + "'");
    int y = out.add_world(name);
    copy_world(m, x, out, y);
    src.push_back(x);
    for (int c : cids) out.add_live(y, c);
    for (const auto& [a, v] : m.out(x)) out.add_edge(y, a, build(v, rn));
    for (std::size_t i = 0; i < cids.size(); ++i) {
      const std::string& c = ext.agents[i];
      for (const auto& [a, v] : m.out(x)) {
        if (a != omega[c]) continue;
        const std::string from = rn(m.world_name(v));
        const std::string to = from + "^" + c;
        Rename sub = [rn, from, to](const std::string& s) {
          std::string r = rn(s);
          if (r == from) return to;
          if (r.rfind(from + ";", 0) == 0) return to + r.substr(from.size());
          return to + ";" + r;
        };
        out.add_edge(y, cids[i], build(v, sub));
      }
    }
    return y;
  };

  // Worlds outside the subtree keep their names and edges; w is rebuilt in place.
  std::vector<int> order = t.subtree(t.root);
  std::map<int, int> placed;
  for (int x : order) {
    if (inside[static_cast<std::size_t>(x)]) continue;
    int y = out.add_world(m.world_name(x));
    copy_world(m, x, out, y);
    src.push_back(x);
    placed[x] = y;
  }
  int wy = build(w, [](const std::string& s) { return s; });
  placed[w] = wy;
  for (const auto& e : m.edges())
    if (!inside[static_cast<std::size_t>(e.from)]) out.add_edge(placed.at(e.from), e.agent, placed.at(e.to));
  TreeModel r = as_tree(out, *out.find_world(m.world_name(t.root)));
  if (origin) *origin = std::move(src);
  return r;
}

}  // namespace tml
