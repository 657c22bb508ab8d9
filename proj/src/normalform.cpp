#include "tml/normalform.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>

#include "tml/error.hpp"

namespace tml {

bool is_literal(const Formula& f) {
  return f.is(Kind::Atom) || f.is(Kind::Top) || f.is(Kind::Bot) || (f.is(Kind::Not) && f.child().is(Kind::Atom));
}

bool is_module(const Formula& f) { return is_literal(f) || f.is_modal(); }

namespace {

void collect_components(const Formula& f, std::set<Formula>& out) {
  if (f.is_binary()) {
    collect_components(f.lhs(), out);
    collect_components(f.rhs(), out);
  } else {
    out.insert(f);
  }
}

const Var& other(const Var& v) {
  static const Var x = "x", y = "y";
  return v == x ? y : x;
}

}  // namespace

std::set<Formula> components(const Formula& f) {
  std::set<Formula> out;
  collect_components(f, out);
  return out;
}

bool is_quantifier_safe(const Formula& f) {
  if (f.is_binary()) return is_quantifier_safe(f.lhs()) && is_quantifier_safe(f.rhs());
  return is_module(f);
}

bool is_qs_normal(const Formula& f) {
  if (f.is_binary()) return is_qs_normal(f.lhs()) && is_qs_normal(f.rhs());
  if (f.is_modal()) return is_fsnf_dnf(f.child());
  return is_literal(f);
}

bool is_fsnf_dnf(const Formula& f) {
  for (const auto& c : flatten(f, Kind::Or))
    if (!is_fsnf_conjunction(c)) return false;
  return true;
}

namespace {

// Fills `out` when f is an FSNF conjunction; returns false otherwise.
bool classify(const Formula& f, FsnfClause& out) {
  bool matrix_seen = false;
  for (const auto& c : flatten(f, Kind::And)) {
    if (is_literal(c)) {
      out.literals.push_back(c);
    } else if (c.is(Kind::Box)) {
      if (out.boxes.contains(c.name()) || !is_fsnf_dnf(c.child())) return false;
      out.boxes.emplace(c.name(), c.child());
    } else if (c.is(Kind::Dia)) {
      if (!is_fsnf_dnf(c.child())) return false;
      out.diamonds[c.name()].push_back(c.child());
    } else if (c.is(Kind::Forall)) {
      const Formula& b = c.child();
      if (c.name() == "x" && b.is(Kind::Forall) && b.name() == "y" && is_qs_normal(b.child())) {
        if (matrix_seen) return false;
        matrix_seen = true;
        out.matrix = b.child();
      } else if (c.name() == "x" && b.is(Kind::Exists) && b.name() == "y" && is_qs_normal(b.child())) {
        out.skolemish.push_back(b.child());
      } else if (is_qs_normal(b)) {
        if (out.universals.contains(c.name())) return false;
        out.universals.emplace(c.name(), b);
      } else {
        return false;
      }
    } else if (c.is(Kind::Exists)) {
      if (!is_qs_normal(c.child())) return false;
      out.existentials[c.name()].push_back(c.child());
    } else {
      return false;
    }
  }
  return true;
}

}  // namespace

bool is_fsnf_conjunction(const Formula& f) {
  FsnfClause c;
  return classify(f, c);
}

FsnfClause decompose_clause(const Formula& f) {
  FsnfClause c;
  if (!classify(f, c)) throw NotFsnf("not an FSNF conjunction");
  // An explicit "true" conjunct is the empty clause.
  std::erase_if(c.literals, [](const Formula& l) { return l.is(Kind::Top); });
  return c;
}

Formula recompose(const FsnfClause& c) {
  std::vector<Formula> parts = c.literals;
  for (const Var& z : {Var("x"), Var("y")}) {
    if (auto it = c.boxes.find(z); it != c.boxes.end()) parts.push_back(Formula::box(z, it->second));
    if (auto it = c.diamonds.find(z); it != c.diamonds.end())
      for (const auto& b : it->second) parts.push_back(Formula::dia(z, b));
  }
  for (const Var& z : {Var("x"), Var("y")}) {
    if (auto it = c.universals.find(z); it != c.universals.end()) parts.push_back(Formula::forall(z, it->second));
    if (auto it = c.existentials.find(z); it != c.existentials.end())
      for (const auto& d : it->second) parts.push_back(Formula::exists(z, d));
  }
  if (c.matrix) parts.push_back(Formula::forall("x", Formula::forall("y", *c.matrix)));
  for (const auto& p : c.skolemish) parts.push_back(Formula::forall("x", Formula::exists("y", p)));
  return conj_all(parts);
}

std::vector<Formula> merge_boxes(const std::vector<Formula>& conjuncts) {
  std::vector<Formula> out;
  std::map<Var, std::size_t> slot;
  for (const auto& c : conjuncts) {
    if (!c.is(Kind::Box)) {
      out.push_back(c);
      continue;
    }
    auto [it, fresh] = slot.emplace(c.name(), out.size());
    if (fresh) out.push_back(c);
    else out[it->second] = Formula::box(c.name(), Formula::conj(out[it->second].child(), c.child()));
  }
  return out;
}

namespace {

Formula strip_quantifiers(const Formula& f) {
  switch (f.kind()) {
    case Kind::Forall:
    case Kind::Exists:
      return strip_quantifiers(f.child());
    case Kind::Not: return Formula::neg(strip_quantifiers(f.child()));
    case Kind::And: return Formula::conj(strip_quantifiers(f.lhs()), strip_quantifiers(f.rhs()));
    case Kind::Or: return Formula::disj(strip_quantifiers(f.lhs()), strip_quantifiers(f.rhs()));
    default: return f;
  }
}

// Drops quantifiers that are vacuous or range over a modality-free body.
// Both are equivalences because live sets are never empty.
Formula simplify(const Formula& f) {
  switch (f.kind()) {
    case Kind::Not: return Formula::neg(simplify(f.child()));
    case Kind::And: return Formula::conj(simplify(f.lhs()), simplify(f.rhs()));
    case Kind::Or: return Formula::disj(simplify(f.lhs()), simplify(f.rhs()));
    case Kind::Box: return Formula::box(f.name(), simplify(f.child()));
    case Kind::Dia: return Formula::dia(f.name(), simplify(f.child()));
    case Kind::Forall:
    case Kind::Exists: {
      Formula b = simplify(f.child());
      if (modal_depth(b) == 0) return strip_quantifiers(b);
      if (!free_vars(b).contains(f.name())) return b;
      return f.is(Kind::Forall) ? Formula::forall(f.name(), b) : Formula::exists(f.name(), b);
    }
    default: return f;
  }
}

Formula relativize(const Formula& f, const Formula& r) {
  switch (f.kind()) {
    case Kind::Not: return Formula::neg(relativize(f.child(), r));
    case Kind::And: return Formula::conj(relativize(f.lhs(), r), relativize(f.rhs(), r));
    case Kind::Or: return Formula::disj(relativize(f.lhs(), r), relativize(f.rhs(), r));
    case Kind::Forall: return Formula::forall(f.name(), relativize(f.child(), r));
    case Kind::Exists: return Formula::exists(f.name(), relativize(f.child(), r));
    case Kind::Box: return Formula::box(f.name(), Formula::disj(Formula::neg(r), relativize(f.child(), r)));
    case Kind::Dia: return Formula::dia(f.name(), Formula::conj(r, relativize(f.child(), r)));
    default: return f;
  }
}

using Clause = std::vector<Formula>;

class Normalizer {
 public:
  Normalizer(std::string marker, std::size_t budget) : marker_(Formula::atom(std::move(marker))), budget_(budget) {}

  Formula dnf_formula(const Formula& f, bool top) {
    tick();
    if (modal_depth(f) == 0) return base(f);
    std::vector<Formula> out;
    for (const auto& c : dnf(f)) {
      Formula g = norm_clause(c, top);
      for (const auto& d : flatten(g, Kind::Or)) out.push_back(d);
    }
    return out.empty() ? Formula::bot() : disj_all(out);
  }

 private:
  void tick(std::size_t n = 1) {
    steps_ += n;
    if (steps_ > budget_) throw ResourceLimit("normalize");
  }

  static Formula complement(const Formula& l) {
    if (l.is(Kind::Not)) return l.child();
    if (l.is(Kind::Top)) return Formula::bot();
    if (l.is(Kind::Bot)) return Formula::top();
    return Formula::neg(l);
  }

  // Deduplicates, drops "true", and rejects contradictory clauses.
  static std::optional<Clause> tidy(const Clause& c) {
    Clause out;
    std::set<Formula> seen;
    for (const auto& l : c) {
      if (l.is(Kind::Top)) continue;
      if (l.is(Kind::Bot)) return std::nullopt;
      if (!seen.insert(l).second) continue;
      out.push_back(l);
    }
    for (const auto& l : out)
      if (is_literal(l) && seen.contains(complement(l))) return std::nullopt;
    return out;
  }

  // DNF over C(f): components are kept whole.
  std::vector<Clause> dnf(const Formula& f) {
    auto it = memo_.find(f);
    if (it != memo_.end()) return it->second;
    std::vector<Clause> out;
    if (f.is(Kind::Or)) {
      out = dnf(f.lhs());
      auto r = dnf(f.rhs());
      out.insert(out.end(), r.begin(), r.end());
    } else if (f.is(Kind::And)) {
      auto l = dnf(f.lhs());
      auto r = dnf(f.rhs());
      for (const auto& a : l)
        for (const auto& b : r) {
          tick();
          Clause c = a;
          c.insert(c.end(), b.begin(), b.end());
          if (auto t = tidy(c)) out.push_back(std::move(*t));
        }
    } else if (auto t = tidy({f})) {
      out.push_back(std::move(*t));
    }
    tick(out.size());
    memo_.emplace(f, out);
    return out;
  }

  Formula base(const Formula& f) {
    std::vector<Formula> out;
    for (const auto& c : dnf(strip_quantifiers(f))) out.push_back(conj_all(c));
    return out.empty() ? Formula::bot() : disj_all(out);
  }

  Formula encode(std::size_t k, const Var& v, bool positive) const {
    const Formula w = Formula::atom(FreshNames::intermediate(k));
    return positive ? Formula::dia(v, Formula::conj(Formula::neg(marker_), w))
                    : Formula::box(v, Formula::disj(marker_, Formula::neg(w)));
  }

  struct Buckets {
    std::vector<Formula> literals, modal;
    std::map<Var, std::vector<Formula>> universals;
    std::vector<std::pair<Var, Formula>> existentials;
    std::vector<Formula> matrix, skolemish;
  };

  // Sentence conjunct forall a. Q b. body with a != b, renamed so a = x.
  static void add_pair(Buckets& b, const Var& a, bool inner_forall, const Formula& body) {
    Formula g = a == "x" ? body : swap_vars(body);
    (inner_forall ? b.matrix : b.skolemish).push_back(g);
  }

  // Replaces every quantified subformula outside modalities, innermost
  // first, by an encoded fresh unary predicate and records its definition.
  Formula make_safe(const Formula& f, std::set<Var>& bound, const std::optional<Var>& clause_var, Buckets& b) {
    switch (f.kind()) {
      case Kind::And:
        return Formula::conj(make_safe(f.lhs(), bound, clause_var, b), make_safe(f.rhs(), bound, clause_var, b));
      case Kind::Or:
        return Formula::disj(make_safe(f.lhs(), bound, clause_var, b), make_safe(f.rhs(), bound, clause_var, b));
      case Kind::Forall:
      case Kind::Exists: {
        tick();
        const Var c = f.name();
        const Var o = other(c);
        const bool had = bound.contains(c);
        bound.insert(c);
        Formula mu = make_safe(f.child(), bound, clause_var, b);
        if (!had) bound.erase(c);
        const Formula nmu = negate_nnf(mu);
        const std::size_t k = fresh_++;
        const Formula pos = encode(k, o, true), neg = encode(k, o, false);
        const bool all = f.is(Kind::Forall);
        if (clause_var && *clause_var == o && !bound.contains(o)) {
          // P(o) <-> Q c. mu with o free in the clause.
          if (all) {
            b.universals[c].push_back(Formula::disj(neg, mu));
            b.existentials.emplace_back(c, Formula::disj(pos, nmu));
          } else {
            b.existentials.emplace_back(c, Formula::disj(neg, mu));
            b.universals[c].push_back(Formula::disj(pos, nmu));
          }
        } else {
          // forall o. (P(o) <-> Q c. mu)
          if (all) {
            add_pair(b, o, true, Formula::disj(neg, mu));
            add_pair(b, o, false, Formula::disj(pos, nmu));
          } else {
            add_pair(b, o, true, Formula::disj(pos, nmu));
            add_pair(b, o, false, Formula::disj(neg, mu));
          }
        }
        return pos;
      }
      default:
        return f;
    }
  }

  Formula qs_normal(const Formula& f) {
    if (f.is(Kind::And)) return Formula::conj(qs_normal(f.lhs()), qs_normal(f.rhs()));
    if (f.is(Kind::Or)) return Formula::disj(qs_normal(f.lhs()), qs_normal(f.rhs()));
    if (f.is(Kind::Box)) return Formula::box(f.name(), dnf_formula(f.child(), false));
    if (f.is(Kind::Dia)) return Formula::dia(f.name(), dnf_formula(f.child(), false));
    return f;
  }

  Formula norm_clause(const Clause& conjuncts, bool top) {
    tick();
    const Formula whole = conj_all(conjuncts);
    if (modal_depth(whole) == 0) return base(whole);
    if (!top && is_fsnf_conjunction(whole)) return whole;

    Buckets b;
    for (const auto& w : conjuncts) {
      if (is_literal(w)) {
        b.literals.push_back(w);
      } else if (w.is_modal()) {
        b.modal.push_back(w);
      } else if (w.is_quantifier()) {
        const VarSet fv = free_vars(w);
        const Var& v = w.name();
        const bool all = w.is(Kind::Forall);
        std::set<Var> bound{v};
        if (fv.size() == 1) {
          Formula lam = make_safe(w.child(), bound, *fv.begin(), b);
          if (all) b.universals[v].push_back(lam);
          else b.existentials.emplace_back(v, lam);
        } else if (fv.empty()) {
          const Formula& eta = w.child();
          if (all && eta.is_quantifier() && eta.name() != v && is_quantifier_safe(eta.child())) {
            add_pair(b, v, eta.is(Kind::Forall), eta.child());
          } else {
            Formula lam = make_safe(eta, bound, std::nullopt, b);
            // Pad with a vacuous quantifier over the other variable.
            if (all) add_pair(b, v, true, lam);
            else add_pair(b, other(v), false, lam);
          }
        } else {
          throw NotFsnf("quantified conjunct with two free variables");
        }
      } else {
        throw NotFsnf("unexpected clause component");
      }
    }

    FsnfClause out;
    for (const auto& l : b.literals) out.literals.push_back(l);
    for (const auto& m : merge_boxes(b.modal)) {
      if (m.is(Kind::Box)) out.boxes.emplace(m.name(), dnf_formula(m.child(), false));
      else out.diamonds[m.name()].push_back(dnf_formula(m.child(), false));
    }
    for (const auto& [z, gs] : b.universals) out.universals.emplace(z, qs_normal(conj_all(gs)));
    for (const auto& [z, d] : b.existentials) out.existentials[z].push_back(qs_normal(d));
    if (!b.matrix.empty()) out.matrix = qs_normal(conj_all(b.matrix));
    for (const auto& p : b.skolemish) out.skolemish.push_back(qs_normal(p));
    return recompose(out);
  }

  Formula marker_;
  std::size_t budget_;
  std::size_t steps_ = 0;
  std::size_t fresh_ = 0;
  std::map<Formula, std::vector<Clause>> memo_;
};

}  // namespace

Formula to_fsnf(const Formula& f, const FreshNames& names, const FsnfOptions& opt) {
  if (!is_sentence(f)) throw NotASentence("to_fsnf expects a sentence");
  for (const auto& v : variables(f))
    if (v != "x" && v != "y") throw VariableLimitExceeded("variable '" + v + "' outside {x, y}");
  if (!is_propositional_atoms(f)) throw Error("to_fsnf expects propositional atoms; apply tr2 first");
  Formula g = to_nnf(f);
  std::string marker = names.real;
  if (opt.relativize && modal_depth(g) > 0) {  // md 0 needs no fresh predicates
    check_fresh(g, names);
    marker = names.marker;
    g = Formula::conj(Formula::atom(marker), relativize(g, Formula::atom(marker)));
  }
  Normalizer n(marker, opt.budget);
  return n.dnf_formula(simplify(g), true);
}

}  // namespace tml
