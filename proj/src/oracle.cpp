// Exhaustive small-model search.
//
// A world at depth k only matters to its parent through the truth values of
// the modal bodies the parent can ask about, one bit per (body, assignment).
// That vector together with the live set is the world's "profile".  Levels are
// built bottom-up: every profile reachable at depth k+1 is known (with the
// fewest worlds needed to realise it) before depth k is enumerated, so the
// search covers every tree model within the bounds without materialising them.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "tml/error.hpp"
#include "tml/semantics.hpp"

namespace tml {

namespace {

struct CNode {
  Kind kind;
  int var = -1;   // bound variable, modal index
  int pred = -1;  // level-local predicate index
  int mod = -1;   // level-local modality index
  std::vector<int> args;
  std::vector<int> kids;
};

struct Pred {
  std::string name;
  int arity;
};

struct Modality {
  bool box;
  int var;
  int body;  // index into next level's bodies
};

struct Level {
  std::vector<Formula> bodies;
  std::vector<int> body_root;  // into nodes
  std::vector<CNode> nodes;
  std::vector<Formula> mods;
  std::vector<Modality> modinfo;
  std::vector<Pred> preds;
};

struct Profile {
  int delta;
  std::string exports;
  std::vector<unsigned> val;                // per predicate, bitmask over tuple codes
  std::vector<std::pair<int, int>> children;  // (label agent, profile at next level)
  std::size_t cost;
};

// Constant folding.  Quantifiers over a constant body fold too, since live
// sets are never empty.
Formula fold(const Formula& f) {
  auto is_top = [](const Formula& g) { return g.is(Kind::Top); };
  auto is_bot = [](const Formula& g) { return g.is(Kind::Bot); };
  switch (f.kind()) {
    case Kind::Not: {
      Formula c = fold(f.child());
      if (is_top(c)) return Formula::bot();
      if (is_bot(c)) return Formula::top();
      return Formula::neg(c);
    }
    case Kind::And: {
      Formula a = fold(f.lhs()), b = fold(f.rhs());
      if (is_bot(a) || is_bot(b)) return Formula::bot();
      if (is_top(a)) return b;
      if (is_top(b) || a == b) return a;
      return Formula::conj(a, b);
    }
    case Kind::Or: {
      Formula a = fold(f.lhs()), b = fold(f.rhs());
      if (is_top(a) || is_top(b)) return Formula::top();
      if (is_bot(a)) return b;
      if (is_bot(b) || a == b) return a;
      return Formula::disj(a, b);
    }
    case Kind::Box: {
      Formula c = fold(f.child());
      return is_top(c) ? c : Formula::box(f.name(), c);
    }
    case Kind::Dia: {
      Formula c = fold(f.child());
      return is_bot(c) ? c : Formula::dia(f.name(), c);
    }
    case Kind::Forall:
    case Kind::Exists: {
      Formula c = fold(f.child());
      if (is_top(c) || is_bot(c)) return c;
      return f.is(Kind::Forall) ? Formula::forall(f.name(), c) : Formula::exists(f.name(), c);
    }
    default: return f;
  }
}

class Oracle {
 public:
  // A relaxed search ignores the world bound while pruning; its witness may
  // be larger than max_worlds, but when it finds none there is none.
  Oracle(const Formula& f, std::size_t max_worlds, int n, int depth, const OracleOptions& opt, bool relaxed,
         std::size_t& steps)
      : f_(f), g_(fold(f)), max_worlds_(max_worlds), n_(n), opt_(opt), relaxed_(relaxed), steps_(steps) {
    VarSet vs = variables(g_);
    vars_.assign(vs.begin(), vs.end());
    if (vars_.empty()) vars_.push_back("x");
    nv_ = static_cast<int>(vars_.size());
    codes_ = 1;
    for (int i = 0; i < nv_; ++i) {
      pow_.push_back(codes_);
      codes_ *= n_;
    }
    depth_ = std::min(depth, modal_depth(g_));
    monotone_ = is_nnf(g_);
    build_levels();
  }

  std::optional<OracleWitness> run() {
    profiles_.assign(levels_.size(), {});
    for (int k = depth_; k >= 0; --k) enumerate(k);
    const Profile* best = nullptr;
    int best_id = -1;
    for (std::size_t i = 0; i < profiles_[0].size(); ++i) {
      const Profile& p = profiles_[0][i];
      int lo = lowest(p.delta);
      int code = 0;
      for (int v = 0; v < nv_; ++v) code += lo * pow_[static_cast<std::size_t>(v)];
      if (p.exports[static_cast<std::size_t>(code)] == '1' && (!best || p.cost < best->cost)) {
        best = &p;
        best_id = static_cast<int>(i);
      }
    }
    if (!best) return std::nullopt;
    OracleWitness w;
    for (int a = 0; a < n_; ++a) w.model.add_agent("d" + std::to_string(a));
    w.world = materialize(w.model, 0, best_id);
    w.model.set_root(w.world);
    if (!check_sentence(w.model, w.world, f_)) throw std::logic_error("oracle witness does not verify");
    return w;
  }

 private:
  int var_index(const Var& v) const {
    return static_cast<int>(std::find(vars_.begin(), vars_.end(), v) - vars_.begin());
  }

  static int lowest(int mask) {
    int i = 0;
    while (!(mask >> i & 1)) ++i;
    return i;
  }

  int compile(Level& L, std::vector<Formula>& next, const Formula& g) {
    CNode c{};
    c.kind = g.kind();
    switch (g.kind()) {
      case Kind::Atom: {
        auto it = std::find_if(L.preds.begin(), L.preds.end(), [&](const Pred& p) { return p.name == g.name(); });
        if (it == L.preds.end()) {
          L.preds.push_back({g.name(), static_cast<int>(g.arity())});
          it = L.preds.end() - 1;
        }
        c.pred = static_cast<int>(it - L.preds.begin());
        for (const auto& a : g.args()) c.args.push_back(var_index(a));
        break;
      }
      case Kind::Forall:
      case Kind::Exists:
        c.var = var_index(g.name());
        c.kids.push_back(compile(L, next, g.child()));
        break;
      case Kind::Box:
      case Kind::Dia: {
        auto it = std::find(L.mods.begin(), L.mods.end(), g);
        if (it == L.mods.end()) {
          auto bt = std::find(next.begin(), next.end(), g.child());
          if (bt == next.end()) {
            next.push_back(g.child());
            bt = next.end() - 1;
          }
          L.mods.push_back(g);
          L.modinfo.push_back({g.is(Kind::Box), var_index(g.name()), static_cast<int>(bt - next.begin())});
          it = L.mods.end() - 1;
        }
        c.mod = static_cast<int>(it - L.mods.begin());
        break;
      }
      default:
        for (std::size_t i = 0; i < g.num_children(); ++i) c.kids.push_back(compile(L, next, g.child(i)));
    }
    L.nodes.push_back(std::move(c));
    return static_cast<int>(L.nodes.size()) - 1;
  }

  void build_levels() {
    std::vector<Formula> cur{g_};
    for (int k = 0; k <= depth_; ++k) {
      Level L;
      L.bodies = cur;
      std::vector<Formula> next;
      for (const auto& b : cur) L.body_root.push_back(compile(L, next, b));
      levels_.push_back(std::move(L));
      cur = std::move(next);
    }
  }

  // Keeps the entries no other entry dominates (superset of 1-bits at no
  // greater cost, or any cost when relaxed).  Only sound when the formula is in NNF, where truth is
  // monotone in every import bit.
  template <class T, class Bits, class Cost>
  void pareto(std::vector<T>& v, Bits bits, Cost cost) {
    if (!monotone_ || v.size() < 2) return;
    const std::size_t words = (bits(v[0]).size() + 63) / 64;
    std::vector<std::vector<std::uint64_t>> packed(v.size(), std::vector<std::uint64_t>(words, 0));
    std::vector<int> pop(v.size(), 0);
    for (std::size_t i = 0; i < v.size(); ++i) {
      const std::string& b = bits(v[i]);
      for (std::size_t p = 0; p < b.size(); ++p)
        if (b[p] == '1') {
          packed[i][p / 64] |= std::uint64_t{1} << (p % 64);
          ++pop[i];
        }
    }
    std::vector<std::size_t> order(v.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      if (!relaxed_ && cost(v[a]) != cost(v[b])) return cost(v[a]) < cost(v[b]);
      return pop[a] > pop[b];
    });
    std::vector<std::size_t> kept;
    for (std::size_t i : order) {
      tick(1 + kept.size() * words / 64);
      bool dominated = false;
      for (std::size_t j : kept) {
        bool sup = true;
        for (std::size_t w = 0; w < words && sup; ++w) sup = (packed[i][w] & ~packed[j][w]) == 0;
        if (sup) {
          dominated = true;
          break;
        }
      }
      if (!dominated) kept.push_back(i);
    }
    std::sort(kept.begin(), kept.end());
    std::vector<T> out;
    out.reserve(kept.size());
    for (std::size_t i : kept) out.push_back(std::move(v[i]));
    v = std::move(out);
  }

  void tick(std::size_t n = 1) {
    steps_ += n;
    if (steps_ > opt_.budget) throw ResourceLimit("oracle");
  }

  // Evaluation context for one world.
  struct Ctx {
    const Level* L;
    int delta;
    const std::vector<unsigned>* val;
    const std::string* imports;
    int env[8];
  };

  int env_code(const Ctx& c) const {
    int code = 0;
    for (int i = 0; i < nv_; ++i) code += c.env[i] * pow_[static_cast<std::size_t>(i)];
    return code;
  }

  bool eval(Ctx& c, int node) const {
    const CNode& x = c.L->nodes[static_cast<std::size_t>(node)];
    switch (x.kind) {
      case Kind::Top: return true;
      case Kind::Bot: return false;
      case Kind::Atom: {
        int code = 0;
        for (std::size_t i = x.args.size(); i-- > 0;) code = code * n_ + c.env[x.args[i]];
        return (*c.val)[static_cast<std::size_t>(x.pred)] >> code & 1U;
      }
      case Kind::Not: return !eval(c, x.kids[0]);
      case Kind::And: return eval(c, x.kids[0]) && eval(c, x.kids[1]);
      case Kind::Or: return eval(c, x.kids[0]) || eval(c, x.kids[1]);
      case Kind::Forall:
      case Kind::Exists: {
        const bool want = x.kind == Kind::Exists;
        const int saved = c.env[x.var];
        bool result = !want;
        for (int d = 0; d < n_; ++d) {
          if (!(c.delta >> d & 1)) continue;
          c.env[x.var] = d;
          if (eval(c, x.kids[0]) == want) {
            result = want;
            break;
          }
        }
        c.env[x.var] = saved;
        return result;
      }
      case Kind::Box:
      case Kind::Dia:
        return (*c.imports)[static_cast<std::size_t>(x.mod * codes_ + env_code(c))] == '1';
    }
    return false;
  }

  bool inside(int code, int mask) const {
    for (int i = 0; i < nv_; ++i)
      if (!(mask >> (code / pow_[static_cast<std::size_t>(i)] % n_) & 1)) return false;
    return true;
  }

  int label_of(int code, int var) const { return code / pow_[static_cast<std::size_t>(var)] % n_; }

  struct State {
    std::string bits;
    std::size_t cost;
    std::vector<std::pair<int, int>> kids;  // (label agent, child profile)
  };

  void enumerate(int k) {
    const Level& L = levels_[static_cast<std::size_t>(k)];
    const bool leaf = k == depth_;
    // A world at depth k has k ancestors, which leaves this much for its subtree.
    const std::size_t kk = static_cast<std::size_t>(k);
    const std::size_t room = relaxed_ ? SIZE_MAX : max_worlds_ > kk ? max_worlds_ - kk : 0;
    const std::size_t nmods = L.mods.size();
    const std::size_t ibits = nmods * static_cast<std::size_t>(codes_);
    const std::size_t ebits = L.bodies.size() * static_cast<std::size_t>(codes_);
    const int full = (1 << n_) - 1;
    std::unordered_map<std::string, int> seen;  // delta|exports -> profile id
    auto& out = profiles_[static_cast<std::size_t>(k)];

    for (int delta = 1; delta <= full; ++delta) {
      if (opt_.constant_domain && delta != full) continue;

      // Per-label closures over subsets of children, then the product over labels.
      std::vector<State> combined{{std::string(ibits, '0'), 0, {}}};
            for (int a = 0; a < n_; ++a) {
        if (!(delta >> a & 1)) continue;
        std::string start(ibits, '0');
        std::vector<char> box_pos(ibits, 0), lab_pos(ibits, 0);
        for (std::size_t m = 0; m < nmods; ++m)
          for (int code = 0; code < codes_; ++code) {
            if (!inside(code, delta) || label_of(code, L.modinfo[m].var) != a) continue;
            std::size_t p = m * static_cast<std::size_t>(codes_) + static_cast<std::size_t>(code);
            lab_pos[p] = 1;
            box_pos[p] = L.modinfo[m].box;
            if (L.modinfo[m].box) start[p] = '1';
          }
        std::vector<State> states;
        states.push_back({start, 0, {}});
        if (!leaf) {
          // Project each candidate child, keeping the cheapest per projection.
          std::unordered_map<std::string, int> proj;
          std::vector<std::pair<std::string, int>> items;
          const auto& next = profiles_[static_cast<std::size_t>(k) + 1];
          for (std::size_t pid = 0; pid < next.size(); ++pid) {
            const Profile& ch = next[pid];
            if ((ch.delta & delta) != delta) continue;
            if (ch.cost + 1 > room) continue;
            tick();
            std::string pb(ibits, '0');
            for (std::size_t p = 0; p < ibits; ++p) {
              if (!lab_pos[p]) continue;
              std::size_t m = p / static_cast<std::size_t>(codes_);
              std::size_t code = p % static_cast<std::size_t>(codes_);
              pb[p] = ch.exports[static_cast<std::size_t>(L.modinfo[m].body) * static_cast<std::size_t>(codes_) + code];
            }
            auto [it, fresh] = proj.emplace(pb, static_cast<int>(items.size()));
            if (fresh) items.emplace_back(pb, static_cast<int>(pid));
            else if (next[pid].cost < next[static_cast<std::size_t>(items[static_cast<std::size_t>(it->second)].second)].cost)
              items[static_cast<std::size_t>(it->second)].second = static_cast<int>(pid);
          }
          pareto(items, [](const auto& it) -> const std::string& { return it.first; },
                 [&](const auto& it) { return next[static_cast<std::size_t>(it.second)].cost; });
          std::unordered_map<std::string, int> index{{start, 0}};
          for (const auto& [pb, pid] : items) {
            const std::size_t ccost = next[static_cast<std::size_t>(pid)].cost;
            const std::size_t before = states.size();
            for (std::size_t s = 0; s < before; ++s) {
              tick();
              if (states[s].cost + ccost + 1 > room) continue;
              std::string nb = states[s].bits;
              for (std::size_t p = 0; p < ibits; ++p) {
                if (!lab_pos[p]) continue;
                if (box_pos[p]) nb[p] = (nb[p] == '1' && pb[p] == '1') ? '1' : '0';
                else nb[p] = (nb[p] == '1' || pb[p] == '1') ? '1' : '0';
              }
              const std::size_t nc = states[s].cost + ccost;
              auto kids = states[s].kids;
              kids.emplace_back(a, pid);
              auto [it, fresh] = index.emplace(nb, static_cast<int>(states.size()));
              if (fresh) states.push_back({nb, nc, std::move(kids)});
              else if (nc < states[static_cast<std::size_t>(it->second)].cost)
                states[static_cast<std::size_t>(it->second)] = {nb, nc, std::move(kids)};
            }
          }
        }
        pareto(states, [](const State& x) -> const std::string& { return x.bits; }, [](const State& x) { return x.cost; });
        // Merge this label into the running product.
        std::vector<State> merged;
        std::unordered_map<std::string, int> mindex;
        for (std::size_t c = 0; c < combined.size(); ++c)
          for (std::size_t s = 0; s < states.size(); ++s) {
            tick();
            const std::size_t nc = combined[c].cost + states[s].cost;
            if (nc + 1 > room) continue;
            std::string nb = combined[c].bits;
            for (std::size_t p = 0; p < ibits; ++p)
              if (states[s].bits[p] == '1') nb[p] = '1';
            auto [it, fresh] = mindex.emplace(nb, static_cast<int>(merged.size()));
            if (!fresh && nc >= merged[static_cast<std::size_t>(it->second)].cost) continue;
            auto kids = combined[c].kids;
            kids.insert(kids.end(), states[s].kids.begin(), states[s].kids.end());
            if (fresh) merged.push_back({nb, nc, std::move(kids)});
            else merged[static_cast<std::size_t>(it->second)] = {nb, nc, std::move(kids)};
          }
        pareto(merged, [](const State& x) -> const std::string& { return x.bits; }, [](const State& x) { return x.cost; });
        combined = std::move(merged);
      }

      // Valuations of the predicates that occur at this level.
      std::vector<int> tuple_count;
      int total_bits = 0;
      for (const auto& p : L.preds) {
        int c = 1;
        for (int i = 0; i < p.arity; ++i) c *= n_;
        tuple_count.push_back(c);
      }
      // Only tuples some atom occurrence can name under an assignment into
      // delta matter; the rest stay false.
      std::vector<std::vector<char>> reach(L.preds.size());
      for (std::size_t p = 0; p < L.preds.size(); ++p) reach[p].assign(static_cast<std::size_t>(tuple_count[p]), 0);
      for (const CNode& x : L.nodes) {
        if (x.kind != Kind::Atom) continue;
        for (int code = 0; code < codes_; ++code) {
          if (!inside(code, delta)) continue;
          int t = 0;
          for (std::size_t i = x.args.size(); i-- > 0;) t = t * n_ + label_of(code, x.args[i]);
          reach[static_cast<std::size_t>(x.pred)][static_cast<std::size_t>(t)] = 1;
        }
      }
      std::vector<std::pair<int, int>> ground;  // (pred, tuple code) that can matter
      for (std::size_t p = 0; p < L.preds.size(); ++p)
        for (int t = 0; t < tuple_count[p]; ++t)
          if (reach[p][static_cast<std::size_t>(t)]) ground.emplace_back(static_cast<int>(p), t);
      total_bits = static_cast<int>(ground.size());
      if (total_bits > 24) throw ResourceLimit("oracle");

      for (std::size_t ci = 0; ci < combined.size(); ++ci) {
        const State& st = combined[ci];
        for (std::uint64_t vmask = 0; vmask < (std::uint64_t{1} << total_bits); ++vmask) {
          std::vector<unsigned> val(L.preds.size(), 0U);
          for (int b = 0; b < total_bits; ++b)
            if (vmask >> b & 1) val[static_cast<std::size_t>(ground[static_cast<std::size_t>(b)].first)] |=
                1U << ground[static_cast<std::size_t>(b)].second;
          Ctx ctx{&L, delta, &val, &st.bits, {}};
          std::string ex(ebits, '0');
          for (int code = 0; code < codes_; ++code) {
            if (!inside(code, delta)) continue;
            for (std::size_t b = 0; b < L.bodies.size(); ++b) {
              tick();
              for (int i = 0; i < nv_; ++i) ctx.env[i] = code / pow_[static_cast<std::size_t>(i)] % n_;
              if (eval(ctx, L.body_root[b])) ex[b * static_cast<std::size_t>(codes_) + static_cast<std::size_t>(code)] = '1';
            }
          }
          std::string key = std::to_string(delta) + "|" + ex;
          const std::size_t cost = st.cost + 1;
          if (cost > room) continue;
          auto it = seen.find(key);
          if (it != seen.end() && out[static_cast<std::size_t>(it->second)].cost <= cost) continue;
          Profile prof{delta, ex, val, st.kids, cost};
          if (it != seen.end()) {
            out[static_cast<std::size_t>(it->second)] = std::move(prof);
          } else {
            seen.emplace(std::move(key), static_cast<int>(out.size()));
            out.push_back(std::move(prof));
          }
        }
      }
    }
  }

  int materialize(KripkeModel& m, int k, int pid) {
    const Profile& p = profiles_[static_cast<std::size_t>(k)][static_cast<std::size_t>(pid)];
    int w = m.add_world("w" + std::to_string(m.num_worlds()));
    for (int a = 0; a < n_; ++a)
      if (p.delta >> a & 1) m.add_live(w, a);
    const Level& L = levels_[static_cast<std::size_t>(k)];
    for (std::size_t i = 0; i < L.preds.size(); ++i) {
      int count = 1;
      for (int j = 0; j < L.preds[i].arity; ++j) count *= n_;
      for (int t = 0; t < count; ++t) {
        if (!(p.val[i] >> t & 1U)) continue;
        AgentTuple tup;
        int code = t;
        for (int j = 0; j < L.preds[i].arity; ++j, code /= n_) tup.push_back(code % n_);
        m.set_true(w, L.preds[i].name, std::move(tup));
      }
    }
    for (auto it = p.children.rbegin(); it != p.children.rend(); ++it) {
      int v = materialize(m, k + 1, it->second);
      m.add_edge(w, it->first, v);
    }
    return w;
  }

  Formula f_;
  Formula g_;  // folded copy the search runs on
  std::size_t max_worlds_;
  int n_;
  OracleOptions opt_;
  std::vector<Var> vars_;
  int nv_ = 0;
  int codes_ = 1;
  std::vector<int> pow_;
  int depth_ = 0;
  std::vector<Level> levels_;
  std::vector<std::vector<Profile>> profiles_;
  bool relaxed_;
  std::size_t& steps_;
  bool monotone_ = false;
};

}  // namespace

std::optional<OracleWitness> oracle_sat(const Formula& f, std::size_t max_worlds, std::size_t max_agents,
                                        int tree_depth, const OracleOptions& opt) {
  if (!is_sentence(f)) throw NotASentence("oracle input must be a sentence");
  if (max_worlds < 1 || max_agents < 1 || tree_depth < 0) throw std::invalid_argument("oracle bounds");
  if (variables(f).size() > 8 || max_agents > 16) throw ResourceLimit("oracle");
  std::size_t steps = 0;
  const bool monotone = is_nnf(f);
  auto attempt = [&](int n) -> std::optional<OracleWitness> {
    if (!monotone) return Oracle(f, max_worlds, n, tree_depth, opt, false, steps).run();
    auto w = Oracle(f, max_worlds, n, tree_depth, opt, true, steps).run();
    if (!w || w->model.num_worlds() <= max_worlds) return w;
    return Oracle(f, max_worlds, n, tree_depth, opt, false, steps).run();
  };
  if (!opt.constant_domain) return attempt(static_cast<int>(max_agents));
  for (std::size_t n = 1; n <= max_agents; ++n)
    if (auto w = attempt(static_cast<int>(n))) return w;
  return std::nullopt;
}

}  // namespace tml
