// ============================================================================
// types.hpp: agent types, witnesses and the bounded-agent compression
// ============================================================================
//
// Types are taken over the depth slice SF^h of the target sentence, h being
// the height of the world.  A 2-type records which slice members hold under
// (x, y) = (c, d) and under the swap; a 1-type bundles the self 2-type, the
// 2-type against the agent on the incoming edge, and the set of 2-types
// against every live agent.
//
// compress() rebuilds a satisfying tree model bottom-up so that every world w
// owns exactly |1-type(w)| * max(q,1) * 3 fresh agents, named
// "<world>:<type>.<e>.<f>".  Ancestors' agents are propagated downwards by
// model extension, so deeper worlds also see them.
//
// ============================================================================

#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "tml/closure.hpp"
#include "tml/formula.hpp"
#include "tml/model.hpp"

namespace tml {

struct TwoType {
  std::vector<std::size_t> gamma_xy;  // closure indices
  std::vector<std::size_t> gamma_yx;
  auto operator<=>(const TwoType&) const = default;
};

struct OneType {
  TwoType lambda1;
  std::optional<TwoType> lambda2;  // nullopt at the root
  std::set<TwoType> lambda3;
  auto operator<=>(const OneType&) const = default;
};

TwoType two_type(const TreeModel& m, int w, int c, int d, const SubformulaClosure& sf);
OneType one_type(const TreeModel& m, int w, int c, const SubformulaClosure& sf);

enum class ExistentialKind { DeltaX, DeltaY, Psi };

/// exists y. body (DeltaX), exists x. body (DeltaY), forall x. exists y. body (Psi).
struct ExistentialPart {
  ExistentialKind kind;
  Formula body;
};

/// The enumeration E_theta.  Throws NotFsnf.
std::vector<ExistentialPart> existential_parts(const Formula& theta);

struct WorldTypes {
  std::vector<OneType> types;             // in order of the least agent having them
  std::map<int, std::size_t> type_of;     // agent -> index into types
  std::vector<int> representative;        // type index -> a^w
  std::map<int, std::vector<int>> witnesses;  // agent -> b_1..b_q
};

WorldTypes analyze_world(const TreeModel& m, int w, const SubformulaClosure& sf,
                         const std::vector<ExistentialPart>& parts);

struct CensusEntry {
  std::string world;         // world of the compressed model
  std::string source;        // world of the input it was built from
  std::size_t one_types;     // |1-type(source)|
  std::size_t type_agents;   // one_types * max(q,1) * 3
  std::size_t live_agents;   // |delta(world)|
};

struct CompressResult {
  TreeModel model;
  std::size_t q = 0;
  std::vector<CensusEntry> census;
};

/// Throws HeightExceeded, NotSatisfiedAtRoot, NotFsnf.
CompressResult compress(const TreeModel& m, const Formula& theta);

struct AgentBound {
  std::size_t sf_size = 0;  // m
  std::size_t q = 0;
  /// bound = factor * 2^exponent with factor = 3 * max(q,1)
  std::size_t factor = 3;
  boost::multiprecision::cpp_int exponent;
  double log2 = 0;
  /// Decimal expansion when the exponent is small enough to print.
  std::optional<boost::multiprecision::cpp_int> exact() const;
  std::string describe() const;
};

AgentBound agent_bound(const Formula& theta);

}  // namespace tml
