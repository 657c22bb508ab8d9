// Equisatisfiable translations: increasing to constant agent sets (tr1 with
// gamma) and term-modal to propositional term-modal (tr2).

#pragma once

#include <string>

#include "tml/formula.hpp"

namespace tml {

struct FreshNames {
  std::string existence = "E_";  // unary "agent exists here"
  std::string real = "q_";       // marks real worlds in tr2 output
  std::string marker = "r_";     // private marker for standalone normalisation
  std::string prop_prefix = "p_";

  std::string prop(const std::string& predicate) const { return prop_prefix + predicate; }
  static std::string intermediate(std::size_t i) { return "W" + std::to_string(i) + "_"; }
  static bool is_intermediate(const std::string& name);
};

/// Throws NameClash if f already uses one of the reserved names.
void check_fresh(const Formula& f, const FreshNames& names = {});

Formula tr1(const Formula& f, const FreshNames& names = {});
Formula gamma(const Formula& f, const FreshNames& names = {});
/// gamma(f) & exists x. E(x) & tr1(f); the live set at the root is non-empty.
Formula to_constant_domain(const Formula& f, const FreshNames& names = {});

Formula tr2(const Formula& f, const FreshNames& names = {});
/// q & tr2(f)
Formula tr2_full(const Formula& f, const FreshNames& names = {});

}  // namespace tml
