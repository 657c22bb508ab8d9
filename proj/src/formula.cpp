#include "tml/formula.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>

#include "tml/error.hpp"

namespace tml {

struct Formula::Node {
  Kind kind;
  std::string name;
  std::vector<Var> args;
  std::vector<Formula> kids;
  std::size_t hash;
  std::size_t size;
};

namespace {

std::size_t mix(std::size_t seed, std::size_t v) {
  return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

const std::vector<Var> kNoArgs;

}  // namespace

Formula Formula::make(Kind k, std::string name, std::vector<Var> args, std::vector<Formula> kids) {
  std::size_t h = mix(0, static_cast<std::size_t>(k));
  h = mix(h, std::hash<std::string>{}(name));
  for (const auto& a : args) h = mix(h, std::hash<std::string>{}(a));
  std::size_t size = 1;
  for (const auto& c : kids) {
    h = mix(h, c.hash());
    size += c.size();
  }
  return Formula(std::make_shared<const Node>(
      Node{k, std::move(name), std::move(args), std::move(kids), h, size}));
}

Formula::Formula() : Formula(top()) {}

Formula Formula::atom(std::string predicate, std::vector<Var> args) {
  return make(Kind::Atom, std::move(predicate), std::move(args), {});
}
Formula Formula::top() {
  static const Formula t = make(Kind::Top, "", {}, {});
  return t;
}
Formula Formula::bot() {
  static const Formula b = make(Kind::Bot, "", {}, {});
  return b;
}
Formula Formula::neg(Formula f) { return make(Kind::Not, "", {}, {std::move(f)}); }
Formula Formula::conj(Formula a, Formula b) {
  return make(Kind::And, "", {}, {std::move(a), std::move(b)});
}
Formula Formula::disj(Formula a, Formula b) {
  return make(Kind::Or, "", {}, {std::move(a), std::move(b)});
}
Formula Formula::forall(Var v, Formula body) {
  return make(Kind::Forall, std::move(v), {}, {std::move(body)});
}
Formula Formula::exists(Var v, Formula body) {
  return make(Kind::Exists, std::move(v), {}, {std::move(body)});
}
Formula Formula::box(Var v, Formula body) {
  return make(Kind::Box, std::move(v), {}, {std::move(body)});
}
Formula Formula::dia(Var v, Formula body) {
  return make(Kind::Dia, std::move(v), {}, {std::move(body)});
}

Kind Formula::kind() const noexcept { return node_->kind; }
const std::string& Formula::name() const noexcept { return node_->name; }
const std::vector<Var>& Formula::args() const noexcept {
  return node_->kind == Kind::Atom ? node_->args : kNoArgs;
}
const Formula& Formula::child(std::size_t i) const {
  if (i >= node_->kids.size()) throw std::out_of_range("Formula::child");
  return node_->kids[i];
}
std::size_t Formula::num_children() const noexcept { return node_->kids.size(); }
std::size_t Formula::hash() const noexcept { return node_->hash; }
std::size_t Formula::size() const noexcept { return node_->size; }

bool operator==(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return true;
  if (a.hash() != b.hash() || a.size() != b.size()) return false;
  const auto& x = *a.node_;
  const auto& y = *b.node_;
  if (x.kind != y.kind || x.name != y.name || x.args != y.args) return false;
  for (std::size_t i = 0; i < x.kids.size(); ++i)
    if (!(x.kids[i] == y.kids[i])) return false;
  return true;
}

std::strong_ordering operator<=>(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return std::strong_ordering::equal;
  const auto& x = *a.node_;
  const auto& y = *b.node_;
  if (auto c = x.kind <=> y.kind; c != 0) return c;
  if (auto c = x.name.compare(y.name); c != 0) return c < 0 ? std::strong_ordering::less : std::strong_ordering::greater;
  if (auto c = x.args <=> y.args; c != 0) return c;
  for (std::size_t i = 0; i < x.kids.size(); ++i)
    if (auto c = x.kids[i] <=> y.kids[i]; c != 0) return c;
  return std::strong_ordering::equal;
}

Formula conj_all(const std::vector<Formula>& fs) {
  if (fs.empty()) return Formula::top();
  Formula acc = fs.front();
  for (std::size_t i = 1; i < fs.size(); ++i) acc = Formula::conj(acc, fs[i]);
  return acc;
}

Formula disj_all(const std::vector<Formula>& fs) {
  if (fs.empty()) return Formula::bot();
  Formula acc = fs.front();
  for (std::size_t i = 1; i < fs.size(); ++i) acc = Formula::disj(acc, fs[i]);
  return acc;
}

std::vector<Formula> flatten(const Formula& f, Kind k) {
  std::vector<Formula> out;
  std::function<void(const Formula&)> go = [&](const Formula& g) {
    if (g.kind() == k) {
      go(g.lhs());
      go(g.rhs());
    } else {
      out.push_back(g);
    }
  };
  go(f);
  return out;
}

namespace {

void collect_free(const Formula& f, VarSet& bound, VarSet& out) {
  switch (f.kind()) {
    case Kind::Atom:
      for (const auto& a : f.args())
        if (!bound.contains(a)) out.insert(a);
      return;
    case Kind::Top:
    case Kind::Bot:
      return;
    case Kind::Not:
    case Kind::And:
    case Kind::Or:
      for (std::size_t i = 0; i < f.num_children(); ++i) collect_free(f.child(i), bound, out);
      return;
    case Kind::Forall:
    case Kind::Exists: {
      const bool was = bound.contains(f.name());
      bound.insert(f.name());
      collect_free(f.child(), bound, out);
      if (!was) bound.erase(f.name());
      return;
    }
    case Kind::Box:
    case Kind::Dia:
      if (!bound.contains(f.name())) out.insert(f.name());
      collect_free(f.child(), bound, out);
      return;
  }
}

}  // namespace

VarSet free_vars(const Formula& f) {
  VarSet bound, out;
  collect_free(f, bound, out);
  return out;
}

bool is_sentence(const Formula& f) { return free_vars(f).empty(); }

VarSet variables(const Formula& f) {
  VarSet out;
  std::function<void(const Formula&)> go = [&](const Formula& g) {
    for (const auto& a : g.args()) out.insert(a);
    if (g.is_quantifier() || g.is_modal()) out.insert(g.name());
    for (std::size_t i = 0; i < g.num_children(); ++i) go(g.child(i));
  };
  go(f);
  return out;
}

namespace {

Formula rebuild(const Formula& f, std::vector<Formula> kids) {
  switch (f.kind()) {
    case Kind::Not: return Formula::neg(kids[0]);
    case Kind::And: return Formula::conj(kids[0], kids[1]);
    case Kind::Or: return Formula::disj(kids[0], kids[1]);
    case Kind::Forall: return Formula::forall(f.name(), kids[0]);
    case Kind::Exists: return Formula::exists(f.name(), kids[0]);
    case Kind::Box: return Formula::box(f.name(), kids[0]);
    case Kind::Dia: return Formula::dia(f.name(), kids[0]);
    default: return f;
  }
}

Formula subst_rec(const Formula& f, const Var& from, const Var& to, bool under_to_binder) {
  auto rename = [&](const Var& v) -> Var {
    if (v != from) return v;
    if (under_to_binder) throw CaptureError("substituting " + from + " by " + to + " would be captured");
    return to;
  };
  switch (f.kind()) {
    case Kind::Atom: {
      std::vector<Var> args;
      args.reserve(f.arity());
      for (const auto& a : f.args()) args.push_back(rename(a));
      return Formula::atom(f.name(), std::move(args));
    }
    case Kind::Top:
    case Kind::Bot:
      return f;
    case Kind::Forall:
    case Kind::Exists:
      if (f.name() == from) return f;
      return rebuild(f, {subst_rec(f.child(), from, to, under_to_binder || f.name() == to)});
    case Kind::Box:
    case Kind::Dia: {
      Var idx = rename(f.name());
      Formula body = subst_rec(f.child(), from, to, under_to_binder);
      return f.is(Kind::Box) ? Formula::box(idx, body) : Formula::dia(idx, body);
    }
    default: {
      std::vector<Formula> kids;
      for (std::size_t i = 0; i < f.num_children(); ++i)
        kids.push_back(subst_rec(f.child(i), from, to, under_to_binder));
      return rebuild(f, std::move(kids));
    }
  }
}

}  // namespace

Formula substitute(const Formula& f, const Var& from, const Var& to) {
  if (from == to) return f;
  if (free_vars(f).contains(to)) throw CaptureError(to + " is free in the formula");
  return subst_rec(f, from, to, false);
}

Formula swap_vars(const Formula& f, const Var& a, const Var& b) {
  auto sw = [&](const Var& v) -> Var { return v == a ? b : (v == b ? a : v); };
  switch (f.kind()) {
    case Kind::Atom: {
      std::vector<Var> args;
      for (const auto& v : f.args()) args.push_back(sw(v));
      return Formula::atom(f.name(), std::move(args));
    }
    case Kind::Top:
    case Kind::Bot:
      return f;
    case Kind::Forall: return Formula::forall(sw(f.name()), swap_vars(f.child(), a, b));
    case Kind::Exists: return Formula::exists(sw(f.name()), swap_vars(f.child(), a, b));
    case Kind::Box: return Formula::box(sw(f.name()), swap_vars(f.child(), a, b));
    case Kind::Dia: return Formula::dia(sw(f.name()), swap_vars(f.child(), a, b));
    default: {
      std::vector<Formula> kids;
      for (std::size_t i = 0; i < f.num_children(); ++i) kids.push_back(swap_vars(f.child(i), a, b));
      return rebuild(f, std::move(kids));
    }
  }
}

int modal_depth(const Formula& f) {
  int d = 0;
  for (std::size_t i = 0; i < f.num_children(); ++i) d = std::max(d, modal_depth(f.child(i)));
  return f.is_modal() ? d + 1 : d;
}

namespace {

Formula nnf(const Formula& f, bool negated) {
  switch (f.kind()) {
    case Kind::Atom: return negated ? Formula::neg(f) : f;
    case Kind::Top: return negated ? Formula::bot() : f;
    case Kind::Bot: return negated ? Formula::top() : f;
    case Kind::Not: return nnf(f.child(), !negated);
    case Kind::And: {
      Formula l = nnf(f.lhs(), negated), r = nnf(f.rhs(), negated);
      return negated ? Formula::disj(l, r) : Formula::conj(l, r);
    }
    case Kind::Or: {
      Formula l = nnf(f.lhs(), negated), r = nnf(f.rhs(), negated);
      return negated ? Formula::conj(l, r) : Formula::disj(l, r);
    }
    case Kind::Forall: {
      Formula b = nnf(f.child(), negated);
      return negated ? Formula::exists(f.name(), b) : Formula::forall(f.name(), b);
    }
    case Kind::Exists: {
      Formula b = nnf(f.child(), negated);
      return negated ? Formula::forall(f.name(), b) : Formula::exists(f.name(), b);
    }
    case Kind::Box: {
      Formula b = nnf(f.child(), negated);
      return negated ? Formula::dia(f.name(), b) : Formula::box(f.name(), b);
    }
    case Kind::Dia: {
      Formula b = nnf(f.child(), negated);
      return negated ? Formula::box(f.name(), b) : Formula::dia(f.name(), b);
    }
  }
  return f;
}

}  // namespace

Formula to_nnf(const Formula& f) { return nnf(f, false); }
Formula negate_nnf(const Formula& f) { return nnf(f, true); }

bool is_nnf(const Formula& f) {
  if (f.is(Kind::Not)) return f.child().is(Kind::Atom);
  for (std::size_t i = 0; i < f.num_children(); ++i)
    if (!is_nnf(f.child(i))) return false;
  return true;
}

Formula canonical(const Formula& f) {
  if (f.num_children() == 0) return f;
  std::vector<Formula> kids;
  for (std::size_t i = 0; i < f.num_children(); ++i) kids.push_back(canonical(f.child(i)));
  if (f.is_binary() && kids[1] < kids[0]) std::swap(kids[0], kids[1]);
  return rebuild(f, std::move(kids));
}

Signature signature(const Formula& f) {
  Signature sig;
  std::function<void(const Formula&)> go = [&](const Formula& g) {
    if (g.is(Kind::Atom)) {
      auto [it, fresh] = sig.emplace(g.name(), g.arity());
      if (!fresh && it->second != g.arity())
        throw ArityMismatch("predicate " + g.name() + " used with arities " +
                            std::to_string(it->second) + " and " + std::to_string(g.arity()));
    }
    for (std::size_t i = 0; i < g.num_children(); ++i) go(g.child(i));
  };
  go(f);
  return sig;
}

bool is_propositional_atoms(const Formula& f) {
  if (f.is(Kind::Atom)) return f.arity() == 0;
  for (std::size_t i = 0; i < f.num_children(); ++i)
    if (!is_propositional_atoms(f.child(i))) return false;
  return true;
}

bool has_quantifier(const Formula& f) {
  if (f.is_quantifier()) return true;
  for (std::size_t i = 0; i < f.num_children(); ++i)
    if (has_quantifier(f.child(i))) return true;
  return false;
}

namespace {

bool is_module_node(const Formula& f) {
  return f.is(Kind::Atom) || f.is(Kind::Top) || f.is(Kind::Bot) || f.is_modal() ||
         (f.is(Kind::Not) && f.child().is(Kind::Atom));
}

void modules_rec(const Formula& f, std::size_t& n, std::set<Formula>* seen) {
  if (is_module_node(f)) {
    ++n;
    if (seen) seen->insert(f);
    if (f.is(Kind::Not)) return;
  }
  for (std::size_t i = 0; i < f.num_children(); ++i) modules_rec(f.child(i), n, seen);
}

}  // namespace

std::size_t count_modules(const Formula& f) {
  std::size_t n = 0;
  modules_rec(f, n, nullptr);
  return n;
}

std::size_t count_distinct_modules(const Formula& f) {
  std::size_t n = 0;
  std::set<Formula> seen;
  modules_rec(f, n, &seen);
  return seen.size();
}

}  // namespace tml
