// ============================================================================
// formula.hpp: immutable term-modal formula AST
// ============================================================================
//
// A Formula is a cheap-to-copy handle onto a shared immutable node.  The
// connectives are exactly the primitive ones: atoms P(x1..xn), true, false,
// negation, binary conjunction and disjunction, the two quantifiers and the
// agent-indexed modalities [x] / <x>.  Implication and bi-implication only
// exist at the parser level.
//
// Equality is structural.  The total order (operator<=>) is structural too,
// so containers keyed by Formula iterate deterministically.
//
// ============================================================================

#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

namespace tml {

enum class Kind : std::uint8_t { Atom, Top, Bot, Not, And, Or, Forall, Exists, Box, Dia };

using Var = std::string;
using VarSet = std::set<Var>;

class Formula {
 public:
  Formula();  // Top

  static Formula atom(std::string predicate, std::vector<Var> args = {});
  static Formula top();
  static Formula bot();
  static Formula neg(Formula f);
  static Formula conj(Formula a, Formula b);
  static Formula disj(Formula a, Formula b);
  static Formula forall(Var v, Formula body);
  static Formula exists(Var v, Formula body);
  static Formula box(Var v, Formula body);
  static Formula dia(Var v, Formula body);

  Kind kind() const noexcept;
  /// Predicate name for atoms; bound or index variable for quantifiers and modalities.
  const std::string& name() const noexcept;
  const std::vector<Var>& args() const noexcept;
  std::size_t arity() const noexcept { return args().size(); }
  const Formula& child(std::size_t i = 0) const;
  const Formula& lhs() const { return child(0); }
  const Formula& rhs() const { return child(1); }
  std::size_t num_children() const noexcept;

  bool is(Kind k) const noexcept { return kind() == k; }
  bool is_quantifier() const noexcept { return is(Kind::Forall) || is(Kind::Exists); }
  bool is_modal() const noexcept { return is(Kind::Box) || is(Kind::Dia); }
  bool is_binary() const noexcept { return is(Kind::And) || is(Kind::Or); }

  std::size_t hash() const noexcept;
  /// Number of AST nodes.
  std::size_t size() const noexcept;
  const void* identity() const noexcept { return node_.get(); }

  friend bool operator==(const Formula& a, const Formula& b);
  friend std::strong_ordering operator<=>(const Formula& a, const Formula& b);

 private:
  struct Node;
  explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  static Formula make(Kind k, std::string name, std::vector<Var> args, std::vector<Formula> kids);

  std::shared_ptr<const Node> node_;
};

struct FormulaHash {
  std::size_t operator()(const Formula& f) const noexcept { return f.hash(); }
};

// n-ary helpers; empty conjunction is true, empty disjunction is false.
Formula conj_all(const std::vector<Formula>& fs);
Formula disj_all(const std::vector<Formula>& fs);
/// Flattens nested binary nodes of the same kind into their operand list.
std::vector<Formula> flatten(const Formula& f, Kind k);

VarSet free_vars(const Formula& f);
bool is_sentence(const Formula& f);
/// Every variable name occurring anywhere (bound, free, index, argument).
VarSet variables(const Formula& f);

/// Replaces every free occurrence of `from` (modal indices included) by `to`.
/// Throws CaptureError if `to` is free in f or would be captured by a binder.
Formula substitute(const Formula& f, const Var& from, const Var& to);
/// Simultaneous renaming x <-> y of every occurrence, bound or free.
Formula swap_vars(const Formula& f, const Var& a = "x", const Var& b = "y");

int modal_depth(const Formula& f);

Formula to_nnf(const Formula& f);
bool is_nnf(const Formula& f);
/// NNF of the negation of an NNF formula.
Formula negate_nnf(const Formula& f);

/// Commutative children sorted, used only as a dedupe key.
Formula canonical(const Formula& f);

/// predicate name -> arity.  Throws ArityMismatch on inconsistent use.
using Signature = std::map<std::string, std::size_t>;
Signature signature(const Formula& f);
bool is_propositional_atoms(const Formula& f);  // every atom has arity 0
bool has_quantifier(const Formula& f);

std::size_t count_modules(const Formula& f);           // occurrences of literals and modal nodes
std::size_t count_distinct_modules(const Formula& f);  // distinct ones

}  // namespace tml

template <>
struct std::hash<tml::Formula> {
  std::size_t operator()(const tml::Formula& f) const noexcept { return f.hash(); }
};
