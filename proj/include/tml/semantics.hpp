// Model checking and the brute-force satisfiability oracle.

#pragma once

#include <cstddef>
#include <map>
#include <optional>

#include "tml/formula.hpp"
#include "tml/model.hpp"

namespace tml {

/// variable -> agent index
using Assignment = std::map<Var, int>;

/// Throws UnboundVariable if a free variable is unassigned and
/// IrrelevantAssignment if one is mapped outside delta(w).
bool check(const KripkeModel& m, int w, const Assignment& sigma, const Formula& f);
/// Throws NotASentence.
bool check_sentence(const KripkeModel& m, int w, const Formula& f);

struct OracleOptions {
  std::size_t budget = 2'000'000;  // profile/valuation steps before ResourceLimit
  bool constant_domain = false;    // every world sees the whole agent set
};

struct OracleWitness {
  KripkeModel model;
  int world = 0;
};

/// Exhaustive search over tree models with at most max_worlds worlds,
/// max_agents agents and depth tree_depth.  f must be a sentence; NNF input
/// lets the search prune dominated states.  The witness fits the bounds but
/// need not be the smallest one.
std::optional<OracleWitness> oracle_sat(const Formula& f, std::size_t max_worlds, std::size_t max_agents,
                                        int tree_depth, const OracleOptions& opt = {});

}  // namespace tml
