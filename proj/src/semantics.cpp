#include "tml/semantics.hpp"

#include <algorithm>
#include <vector>

#include "tml/error.hpp"

namespace tml {

namespace {

class Checker {
 public:
  explicit Checker(const KripkeModel& m) : m_(m) {}

  bool eval(int w, const Formula& f) {
    switch (f.kind()) {
      case Kind::Top: return true;
      case Kind::Bot: return false;
      case Kind::Atom: {
        AgentTuple t;
        t.reserve(f.arity());
        for (const auto& v : f.args()) t.push_back(lookup(v));
        return m_.holds(w, f.name(), t);
      }
      case Kind::Not: return !eval(w, f.child());
      case Kind::And: return eval(w, f.lhs()) && eval(w, f.rhs());
      case Kind::Or: return eval(w, f.lhs()) || eval(w, f.rhs());
      case Kind::Forall:
      case Kind::Exists: {
        const bool want = f.is(Kind::Exists);
        for (int d : m_.delta(w)) {
          env_.emplace_back(f.name(), d);
          bool r = eval(w, f.child());
          env_.pop_back();
          if (r == want) return want;
        }
        return !want;
      }
      case Kind::Box:
      case Kind::Dia: {
        const bool want = f.is(Kind::Dia);
        const int a = lookup(f.name());
        for (const auto& [b, v] : m_.out(w)) {
          if (b != a) continue;
          if (eval(v, f.child()) == want) return want;
        }
        return !want;
      }
    }
    return false;
  }

  std::vector<std::pair<Var, int>> env_;

 private:
  int lookup(const Var& v) const {
    for (auto it = env_.rbegin(); it != env_.rend(); ++it)
      if (it->first == v) return it->second;
    throw UnboundVariable("variable '" + v + "' is unassigned");
  }

  const KripkeModel& m_;
};

}  // namespace

bool check(const KripkeModel& m, int w, const Assignment& sigma, const Formula& f) {
  if (w < 0 || w >= static_cast<int>(m.num_worlds())) throw UnknownWorld("world index out of range");
  for (const auto& v : free_vars(f)) {
    auto it = sigma.find(v);
    if (it == sigma.end()) throw UnboundVariable("variable '" + v + "' is unassigned");
    if (!m.delta(w).contains(it->second))
      throw IrrelevantAssignment("variable '" + v + "' is mapped to a non-live agent");
  }
  Checker c(m);
  for (const auto& kv : sigma) c.env_.push_back(kv);
  return c.eval(w, f);
}

bool check_sentence(const KripkeModel& m, int w, const Formula& f) {
  if (!is_sentence(f)) throw NotASentence("formula has free variables");
  return check(m, w, {}, f);
}

}  // namespace tml
