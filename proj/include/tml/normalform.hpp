// ============================================================================
// normalform.hpp: Fine-Scott normal form for two-variable PTML
// ============================================================================
//
// A module is a literal or a modal formula.  C(f) is the set of outermost
// components (modules and quantified formulas reached through & and |).  A
// formula is quantifier-safe when all of C(f) are modules.
//
// An FSNF conjunction has the shape
//
//   s_1 & ... & [z] a^z & <z> b^z_j & forall z g & exists z d_k
//       & forall x. forall y. phi & forall x. exists y. psi_l
//
// with at most one box per index, one universal per bound variable and one
// forall-forall matrix.  Modal bodies are FSNF DNF; quantified bodies are
// quantifier-safe with FSNF DNF modal bodies.
//
// ============================================================================

#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "tml/formula.hpp"
#include "tml/translate.hpp"

namespace tml {

bool is_literal(const Formula& f);  // atom, negated atom, true, false
bool is_module(const Formula& f);
std::set<Formula> components(const Formula& f);
bool is_quantifier_safe(const Formula& f);
bool is_qs_normal(const Formula& f);
bool is_fsnf_dnf(const Formula& f);
bool is_fsnf_conjunction(const Formula& f);

struct FsnfClause {
  std::vector<Formula> literals;
  std::map<Var, Formula> boxes;                     // index -> alpha
  std::map<Var, std::vector<Formula>> diamonds;     // index -> betas
  std::map<Var, Formula> universals;                // bound variable -> gamma
  std::map<Var, std::vector<Formula>> existentials;  // bound variable -> deltas
  std::optional<Formula> matrix;                    // forall x forall y
  std::vector<Formula> skolemish;                   // forall x exists y

  bool operator==(const FsnfClause&) const = default;
};

/// Throws NotFsnf unless is_fsnf_conjunction(f).
FsnfClause decompose_clause(const Formula& f);
/// Conjunction in the displayed order; the empty clause is true.
Formula recompose(const FsnfClause& c);

/// At most one box per index, merged bodies in first-seen order.
std::vector<Formula> merge_boxes(const std::vector<Formula>& conjuncts);

struct FsnfOptions {
  std::size_t budget = 200'000;  // DNF clauses + rewrite steps before ResourceLimit
  /// Standalone use: guard modalities with names.marker first.  The solver
  /// passes false and a tr2 output, whose marker is names.real.
  bool relativize = true;
};

/// Equisatisfiable FSNF DNF of an NNF two-variable PTML sentence.
/// Throws NotASentence, ResourceLimit("normalize").
Formula to_fsnf(const Formula& f, const FreshNames& names = {}, const FsnfOptions& opt = {});

}  // namespace tml
