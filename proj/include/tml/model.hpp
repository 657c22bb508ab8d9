// ============================================================================
// model.hpp: increasing-agent Kripke structures and tree models
// ============================================================================
//
// Worlds and agents carry string names but are addressed by dense indices.
// delta(w) is the set of agents live at w; an edge (w, d, v) needs
// d in delta(w) and delta(w) a subset of delta(v).  Valuations map a
// predicate name to the tuples of agents where it holds; propositions hold
// iff the empty tuple is present.
//
// ============================================================================

#pragma once

#include <array>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace tml {

using AgentTuple = std::vector<int>;
using Valuation = std::map<std::string, std::set<AgentTuple>>;

struct Edge {
  int from;
  int agent;
  int to;
  auto operator<=>(const Edge&) const = default;
};

class KripkeModel {
 public:
  /// Returns the index of the world, creating it if needed.
  int add_world(const std::string& name);
  int add_agent(const std::string& name);
  void add_live(int w, int agent);
  void add_edge(int w, int agent, int v);
  void set_true(int w, const std::string& predicate, AgentTuple tuple);
  void set_root(int w) { root_ = w; }

  std::size_t num_worlds() const noexcept { return worlds_.size(); }
  std::size_t num_agents() const noexcept { return agents_.size(); }
  const std::string& world_name(int w) const { return worlds_.at(static_cast<std::size_t>(w)); }
  const std::string& agent_name(int a) const { return agents_.at(static_cast<std::size_t>(a)); }
  std::optional<int> find_world(const std::string& name) const;
  std::optional<int> find_agent(const std::string& name) const;
  int world(const std::string& name) const;  // throws UnknownWorld
  int agent(const std::string& name) const;  // throws Error

  const std::set<int>& delta(int w) const { return delta_.at(static_cast<std::size_t>(w)); }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  /// Outgoing (agent, target) pairs of w in insertion order.
  const std::vector<std::pair<int, int>>& out(int w) const { return out_.at(static_cast<std::size_t>(w)); }
  const Valuation& valuation(int w) const { return val_.at(static_cast<std::size_t>(w)); }
  bool holds(int w, const std::string& predicate, const AgentTuple& tuple) const;
  std::optional<int> root() const noexcept { return root_; }

 private:
  std::vector<std::string> worlds_, agents_;
  std::map<std::string, int> world_ix_, agent_ix_;
  std::vector<std::set<int>> delta_;
  std::vector<Edge> edges_;
  std::set<Edge> edge_set_;
  std::vector<std::vector<std::pair<int, int>>> out_;
  std::vector<Valuation> val_;
  std::optional<int> root_;
};

/// Human-readable invariant violations; empty iff the model is well formed.
std::vector<std::string> validate(const KripkeModel& m);

struct TreeModel {
  KripkeModel model;
  int root = 0;
  std::vector<int> parent;    // -1 at the root
  std::vector<int> in_agent;  // -1 at the root
  std::vector<int> depth;

  int height(int w) const;
  /// (parent, agent) of the unique incoming edge; nullopt at the root.
  std::optional<std::pair<int, int>> incoming(int w) const;
  std::vector<int> subtree(int w) const;  // preorder
  int max_height() const;
};

/// Checks that the edges of m form a tree rooted at `root`; throws ModelFormatError otherwise.
TreeModel as_tree(const KripkeModel& m, int root);

/// Paths of length <= depth from root.  World names are "root;agent;child;...".
TreeModel tree_unravel(const KripkeModel& m, const std::string& root, int depth);

struct ExtensionMap {
  std::vector<std::string> agents;                // C, fresh agent names
  std::map<std::string, std::string> omega;  // c -> live agent at w
};

/// Adds C to the subtree at w guided by Omega; copies are named "<u>^<c>".
TreeModel extend(const TreeModel& t, int w, const ExtensionMap& ext, std::vector<int>* origin = nullptr);

}  // namespace tml
