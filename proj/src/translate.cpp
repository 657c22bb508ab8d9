#include "tml/translate.hpp"

#include <cctype>

#include "tml/error.hpp"

namespace tml {

bool FreshNames::is_intermediate(const std::string& name) {
  if (name.size() < 3 || name.front() != 'W' || name.back() != '_') return false;
  for (std::size_t i = 1; i + 1 < name.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(name[i]))) return false;
  return true;
}

void check_fresh(const Formula& f, const FreshNames& names) {
  const Signature sig = signature(f);
  for (const auto& [p, arity] : sig) {
    (void)arity;
    if (p == names.existence || p == names.real || p == names.marker || FreshNames::is_intermediate(p))
      throw NameClash("predicate '" + p + "' is a reserved name");
    if (sig.contains(names.prop(p)))
      throw NameClash("predicate '" + names.prop(p) + "' collides with an encoding name");
  }
}

namespace {

Formula t1(const Formula& f, const FreshNames& n) {
  switch (f.kind()) {
    case Kind::Atom:
    case Kind::Top:
    case Kind::Bot:
      return f;
    case Kind::Not: return Formula::neg(t1(f.child(), n));
    case Kind::And: return Formula::conj(t1(f.lhs(), n), t1(f.rhs(), n));
    case Kind::Or: return Formula::disj(t1(f.lhs(), n), t1(f.rhs(), n));
    case Kind::Exists:
      return Formula::exists(f.name(), Formula::conj(Formula::atom(n.existence, {f.name()}), t1(f.child(), n)));
    case Kind::Forall:
      return Formula::forall(
          f.name(), Formula::disj(Formula::neg(Formula::atom(n.existence, {f.name()})), t1(f.child(), n)));
    case Kind::Box: return Formula::box(f.name(), t1(f.child(), n));
    case Kind::Dia: return Formula::dia(f.name(), t1(f.child(), n));
  }
  return f;
}

Formula all_boxes(int times, Formula body) {
  for (int i = 0; i < times; ++i) body = Formula::forall("y", Formula::box("y", body));
  return body;
}

Formula encode_atom(const Formula& a, bool positive, const FreshNames& n) {
  const Formula q = Formula::atom(n.real);
  Formula p = Formula::atom(n.prop(a.name()));
  if (a.arity() == 0) return positive ? p : Formula::neg(p);
  Formula acc = positive ? Formula::conj(Formula::neg(q), p) : Formula::disj(q, Formula::neg(p));
  for (std::size_t i = a.arity(); i-- > 0;) {
    const Var& v = a.args()[i];
    if (i + 1 == a.arity()) acc = positive ? Formula::dia(v, acc) : Formula::box(v, acc);
    else acc = positive ? Formula::dia(v, Formula::conj(Formula::neg(q), acc))
                        : Formula::box(v, Formula::disj(q, acc));
  }
  return acc;
}

Formula t2(const Formula& f, const FreshNames& n) {
  const Formula q = Formula::atom(n.real);
  switch (f.kind()) {
    case Kind::Atom: return encode_atom(f, true, n);
    case Kind::Top:
    case Kind::Bot:
      return f;
    case Kind::Not:
      if (f.child().is(Kind::Atom)) return encode_atom(f.child(), false, n);
      return t2(to_nnf(f), n);
    case Kind::And: return Formula::conj(t2(f.lhs(), n), t2(f.rhs(), n));
    case Kind::Or: return Formula::disj(t2(f.lhs(), n), t2(f.rhs(), n));
    case Kind::Forall: return Formula::forall(f.name(), t2(f.child(), n));
    case Kind::Exists: return Formula::exists(f.name(), t2(f.child(), n));
    case Kind::Box: return Formula::box(f.name(), Formula::disj(Formula::neg(q), t2(f.child(), n)));
    case Kind::Dia: return Formula::dia(f.name(), Formula::conj(q, t2(f.child(), n)));
  }
  return f;
}

}  // namespace

Formula tr1(const Formula& f, const FreshNames& names) {
  check_fresh(f, names);
  return t1(f, names);
}

Formula gamma(const Formula& f, const FreshNames& names) {
  const int md = modal_depth(f);
  const Formula e = Formula::atom(names.existence, {"x"});
  std::vector<Formula> terms;
  for (int i = 0; i <= md; ++i)
    for (int j = 0; i + j <= md; ++j)
      terms.push_back(all_boxes(i, Formula::forall("x", Formula::disj(Formula::neg(e), all_boxes(j, e)))));
  return conj_all(terms);
}

Formula to_constant_domain(const Formula& f, const FreshNames& names) {
  const Formula body = tr1(f, names);
  return Formula::conj(Formula::conj(gamma(f, names), Formula::exists("x", Formula::atom(names.existence, {"x"}))),
                       body);
}

Formula tr2(const Formula& f, const FreshNames& names) {
  check_fresh(f, names);
  return t2(f, names);
}

Formula tr2_full(const Formula& f, const FreshNames& names) {
  return Formula::conj(Formula::atom(names.real), tr2(f, names));
}

}  // namespace tml
