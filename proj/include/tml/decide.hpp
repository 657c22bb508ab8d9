// Grounding over a finite constant agent set, a multimodal K tableau, and the
// solve loop over domain sizes.

#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tml/formula.hpp"
#include "tml/model.hpp"
#include "tml/types.hpp"

namespace tml {

/// Hash-consed propositional multimodal formula in negation normal form.
/// Node 0 is false, node 1 is true.
class GroundFormula {
 public:
  enum class Op : std::uint8_t { False, True, Lit, NegLit, And, Or, Box, Dia };

  struct Node {
    Op op;
    int arg = -1;           // ground atom id (Lit/NegLit) or agent id (Box/Dia)
    std::vector<int> kids;  // sorted, duplicate-free for And/Or
    bool operator==(const Node&) const = default;
  };

  GroundFormula();

  int atom(const std::string& predicate, const std::vector<int>& agents);
  int literal(int atom, bool positive);
  int conj(std::vector<int> kids);
  int disj(std::vector<int> kids);
  int box(int agent, int kid);
  int dia(int agent, int kid);

  const Node& node(int id) const { return nodes_.at(static_cast<std::size_t>(id)); }
  std::size_t num_nodes() const noexcept { return nodes_.size(); }
  int root() const noexcept { return root_; }
  void set_root(int id) { root_ = id; }
  std::size_t num_agents() const noexcept { return agents_.size(); }
  const std::string& agent_name(int a) const { return agents_.at(static_cast<std::size_t>(a)); }
  void set_agents(std::vector<std::string> names) { agents_ = std::move(names); }

  struct GroundAtom {
    std::string predicate;
    std::vector<int> agents;
    bool operator==(const GroundAtom&) const = default;
  };
  const GroundAtom& ground_atom(int id) const { return atoms_.at(static_cast<std::size_t>(id)); }
  std::size_t num_atoms() const noexcept { return atoms_.size(); }
  /// "P@d1,d2"; arity-0 atoms render as "p@".
  std::string atom_name(int id) const;

  int modal_depth(int id) const;
  std::string render(int id) const;
  std::string render() const { return render(root_); }

 private:
  int intern(Node n);

  std::vector<Node> nodes_;
  std::vector<GroundAtom> atoms_;
  std::vector<std::string> agents_;
  std::map<std::pair<std::string, std::vector<int>>, int> atom_ix_;
  std::map<std::pair<Op, std::pair<int, std::vector<int>>>, int> node_ix_;
  int root_ = 1;
};

/// Expands quantifiers over `agents` (names).  f must be NNF; free variables
/// are not allowed.  Throws EmptyDomain.
GroundFormula ground(const Formula& f, const std::vector<std::string>& agents);

/// Tree model satisfying g at its root (constant domain, every agent live
/// everywhere), or nullopt.  `budget` bounds the number of worlds created
/// during the search; throws ResourceLimit("tableau").
std::optional<TreeModel> mm_sat(const GroundFormula& g, int depth, std::size_t budget);

struct SolverConfig {
  /// nullopt means "up to the theorem bound".
  std::optional<std::size_t> max_agents = 3;
  std::size_t node_budget = 2'000'000;
  std::size_t normalize_budget = 200'000;
  bool emit_certificate = true;
  std::size_t parallel_width = 1;
};

struct SatResult {
  enum class Status { Sat, Unsat, UnsatUpTo, ResourceLimit };
  Status status = Status::UnsatUpTo;
  std::size_t k = 0;                   // agents of the certificate, or the last k tried
  std::optional<AgentBound> bound;     // absent when normalisation gave up
  std::optional<TreeModel> certificate;
  std::string stage;                   // for ResourceLimit

  static const char* status_name(Status s);
};

/// Throws NotASentence, VariableLimitExceeded, NameClash.
SatResult solve(const Formula& f, const SolverConfig& cfg = {});

struct BoundReport {
  AgentBound bound;
  std::size_t input_size = 0;
  std::size_t constant_size = 0;  // gamma & exists x E(x) & tr1
  std::size_t ptml_size = 0;      // q & tr2
  std::size_t fsnf_size = 0;
};

BoundReport theoretical_bound_report(const Formula& f, std::size_t normalize_budget = 200'000);

}  // namespace tml
