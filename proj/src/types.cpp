#include "tml/types.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "tml/error.hpp"
#include "tml/normalform.hpp"
#include "tml/semantics.hpp"

namespace tml {

namespace {

int slice_height(const TreeModel& m, int w, const SubformulaClosure& sf) {
  const int h = m.height(w);
  if (h > sf.depth()) throw HeightExceeded("world " + m.model.world_name(w) + " is deeper than the modal depth");
  return h;
}

void require_live(const TreeModel& m, int w, int c) {
  if (!m.model.delta(w).contains(c))
    throw AgentNotLive("agent " + m.model.agent_name(c) + " is not live at " + m.model.world_name(w));
}

std::vector<std::size_t> satisfied(const TreeModel& m, int w, int c, int d, const SubformulaClosure& sf, int h) {
  std::vector<std::size_t> out;
  const Assignment sigma{{"x", c}, {"y", d}};
  for (const auto& g : sf.slice(h))
    if (check(m.model, w, sigma, g)) out.push_back(*sf.index_of(g));
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TwoType two_type(const TreeModel& m, int w, int c, int d, const SubformulaClosure& sf) {
  require_live(m, w, c);
  require_live(m, w, d);
  const int h = slice_height(m, w, sf);
  return {satisfied(m, w, c, d, sf, h), satisfied(m, w, d, c, sf, h)};
}

OneType one_type(const TreeModel& m, int w, int c, const SubformulaClosure& sf) {
  OneType t;
  t.lambda1 = two_type(m, w, c, c, sf);
  if (auto in = m.incoming(w)) t.lambda2 = two_type(m, w, c, in->second, sf);
  for (int d : m.model.delta(w)) t.lambda3.insert(two_type(m, w, c, d, sf));
  return t;
}

namespace {

void collect_parts(const Formula& f, std::vector<ExistentialPart>& out, std::set<std::pair<int, Formula>>& seen);

void collect_qs(const Formula& f, std::vector<ExistentialPart>& out, std::set<std::pair<int, Formula>>& seen) {
  if (f.is_binary()) {
    collect_qs(f.lhs(), out, seen);
    collect_qs(f.rhs(), out, seen);
  } else if (f.is_modal()) {
    collect_parts(f.child(), out, seen);
  }
}

void add_part(ExistentialKind k, const Formula& body, std::vector<ExistentialPart>& out,
              std::set<std::pair<int, Formula>>& seen) {
  if (seen.emplace(static_cast<int>(k), body).second) out.push_back({k, body});
}

void collect_parts(const Formula& f, std::vector<ExistentialPart>& out, std::set<std::pair<int, Formula>>& seen) {
  for (const auto& clause : flatten(f, Kind::Or)) {
    const FsnfClause c = decompose_clause(clause);
    if (auto it = c.existentials.find("y"); it != c.existentials.end())
      for (const auto& d : it->second) add_part(ExistentialKind::DeltaX, d, out, seen);
    if (auto it = c.existentials.find("x"); it != c.existentials.end())
      for (const auto& d : it->second) add_part(ExistentialKind::DeltaY, d, out, seen);
    for (const auto& p : c.skolemish) add_part(ExistentialKind::Psi, p, out, seen);
    for (const auto& [z, a] : c.boxes) collect_parts(a, out, seen);
    for (const auto& [z, bs] : c.diamonds)
      for (const auto& b : bs) collect_parts(b, out, seen);
    for (const auto& [z, g] : c.universals) collect_qs(g, out, seen);
    for (const auto& [z, ds] : c.existentials)
      for (const auto& d : ds) collect_qs(d, out, seen);
    if (c.matrix) collect_qs(*c.matrix, out, seen);
    for (const auto& p : c.skolemish) collect_qs(p, out, seen);
  }
}

}  // namespace

std::vector<ExistentialPart> existential_parts(const Formula& theta) {
  if (!is_fsnf_dnf(theta)) throw NotFsnf("existential_parts expects an FSNF DNF");
  std::vector<ExistentialPart> all;
  std::set<std::pair<int, Formula>> seen;
  collect_parts(theta, all, seen);
  std::vector<ExistentialPart> out;
  for (auto k : {ExistentialKind::DeltaX, ExistentialKind::DeltaY, ExistentialKind::Psi})
    for (const auto& p : all)
      if (p.kind == k) out.push_back(p);
  return out;
}

WorldTypes analyze_world(const TreeModel& m, int w, const SubformulaClosure& sf,
                         const std::vector<ExistentialPart>& parts) {
  WorldTypes wt;
  const auto& live = m.model.delta(w);
  for (int c : live) {
    OneType t = one_type(m, w, c, sf);
    auto it = std::find(wt.types.begin(), wt.types.end(), t);
    if (it == wt.types.end()) {
      wt.types.push_back(std::move(t));
      wt.representative.push_back(c);
      wt.type_of[c] = wt.types.size() - 1;
    } else {
      wt.type_of[c] = static_cast<std::size_t>(it - wt.types.begin());
    }
  }
  if (auto in = m.incoming(w)) wt.representative[wt.type_of.at(in->second)] = in->second;

  const int fallback = *live.begin();
  for (int c : live) {
    std::vector<int> wit;
    for (const auto& p : parts) {
      int found = fallback;
      for (int d : live) {
        const Assignment sigma = p.kind == ExistentialKind::DeltaY ? Assignment{{"x", d}, {"y", c}}
                                                                   : Assignment{{"x", c}, {"y", d}};
        if (check(m.model, w, sigma, p.body)) {
          found = d;
          break;
        }
      }
      wit.push_back(found);
    }
    wt.witnesses[c] = std::move(wit);
  }
  return wt;
}

namespace {

std::string own_agent(const std::string& world, std::size_t type, std::size_t e, int f) {
  return world + ":" + std::to_string(type) + "." + std::to_string(e) + "." + std::to_string(f);
}

class Compressor {
 public:
  Compressor(const TreeModel& m, const Formula& theta)
      : m_(m), sf_(theta), parts_(existential_parts(theta)), q_(parts_.size()), qq_(std::max<std::size_t>(q_, 1)) {
    if (m.max_height() > sf_.depth()) throw HeightExceeded("tree is deeper than the modal depth");
    if (!check_sentence(m.model, m.root, theta)) throw NotSatisfiedAtRoot("theta does not hold at the root");
    for (int w = 0; w < static_cast<int>(m.model.num_worlds()); ++w)
      types_.push_back(analyze_world(m, w, sf_, parts_));
  }

  CompressResult run() {
    CompressResult r;
    const Built& b = build(m_.root);
    r.model = b.tree;
    r.q = q_;
    for (int w = 0; w < static_cast<int>(r.model.model.num_worlds()); ++w) {
      const std::string& name = r.model.model.world_name(w);
      const std::string& src = b.source[static_cast<std::size_t>(w)];
      const std::size_t nt = types_[static_cast<std::size_t>(m_.model.world(src))].types.size();
      r.census.push_back({name, src, nt, nt * qq_ * 3, r.model.model.delta(w).size()});
    }
    return r;
  }

 private:
  std::string u_agent(int u, int a, std::size_t e, int f) const {
    return own_agent(m_.model.world_name(u), types_[static_cast<std::size_t>(u)].type_of.at(a), e, f);
  }

  // Omega for the copy attached through (lambda, e, f) towards successor u.
  std::map<std::string, std::string> omega(int w, std::size_t lambda, std::size_t e, int f, int u) const {
    const WorldTypes& tw = types_[static_cast<std::size_t>(w)];
    const std::string& wn = m_.model.world_name(w);
    const auto mod3 = [](int v) { return ((v % 3) + 3) % 3; };
    std::map<std::string, std::string> om;
    auto define = [&](const std::string& c, const std::string& image, const char* rule) {
      auto [it, fresh] = om.emplace(c, image);
      if (!fresh && it->second != image)
        throw std::logic_error(std::string("omega rules overlap (") + rule + ") at " + c);
    };
    const int rep_l = tw.representative[lambda];
    const auto& wit = tw.witnesses.at(rep_l);
    // 1. same f index: follow the representative.
    for (std::size_t pi = 0; pi < tw.types.size(); ++pi)
      define(own_agent(wn, pi, e, f), u_agent(u, tw.representative[pi], e, f), "representative");
    // 2. f+1: the k-th witness of the current representative.
    for (std::size_t k = 0; k < q_; ++k) {
      const int b = wit[k];
      define(own_agent(wn, tw.type_of.at(b), k + 1, mod3(f + 1)), u_agent(u, b, e, f), "witness");
    }
    // 3. f-1: agents whose e-th witness has the current type.
    if (q_ > 0) {
      for (std::size_t pi = 0; pi < tw.types.size(); ++pi) {
        const int rep_p = tw.representative[pi];
        const int d = tw.witnesses.at(rep_p)[e - 1];
        if (tw.type_of.at(d) != lambda) continue;
        const TwoType target = two_type(m_, w, d, rep_p, sf_);
        int chosen = -1;
        for (int a : m_.model.delta(w))
          if (two_type(m_, w, rep_l, a, sf_) == target) {
            chosen = a;
            break;
          }
        if (chosen < 0) throw std::logic_error("no agent realises the required 2-type");
        for (std::size_t e2 = 1; e2 <= qq_; ++e2)
          define(own_agent(wn, pi, e2, mod3(f - 1)), u_agent(u, chosen, e, f), "matching");
      }
    }
    // 4. everything else follows the representative of its type.
    for (std::size_t pi = 0; pi < tw.types.size(); ++pi)
      for (std::size_t e2 = 1; e2 <= qq_; ++e2)
        for (int f2 = 0; f2 < 3; ++f2) om.emplace(own_agent(wn, pi, e2, f2), u_agent(u, tw.representative[pi], e, f));
    return om;
  }

  struct Built {
    TreeModel tree;
    std::vector<std::string> source;  // world index -> input world name
  };

  const Built& build(int w) {
    if (auto it = memo_.find(w); it != memo_.end()) return it->second;
    const WorldTypes& tw = types_[static_cast<std::size_t>(w)];
    const std::string& wn = m_.model.world_name(w);
    KripkeModel out;
    std::vector<std::string> src;
    const int root = out.add_world(wn);
    src.push_back(wn);
    for (std::size_t t = 0; t < tw.types.size(); ++t)
      for (std::size_t e = 1; e <= qq_; ++e)
        for (int f = 0; f < 3; ++f) out.add_live(root, out.add_agent(own_agent(wn, t, e, f)));
    for (const auto& [p, tuples] : m_.model.valuation(w))
      if (tuples.contains(AgentTuple{})) out.set_true(root, p, {});

    ExtensionMap ext;
    for (int a : out.delta(root)) ext.agents.push_back(out.agent_name(a));
    for (std::size_t lambda = 0; lambda < tw.types.size(); ++lambda) {
      const int rep = tw.representative[lambda];
      for (const auto& [a, u] : m_.model.out(w)) {
        if (a != rep) continue;
        const Built& sub = build(u);
        for (std::size_t e = 1; e <= qq_; ++e)
          for (int f = 0; f < 3; ++f) {
            ext.omega = omega(w, lambda, e, f, u);
            std::vector<int> origin;
            const TreeModel copy = extend(sub.tree, sub.tree.root, ext, &origin);
            const std::string label = own_agent(wn, lambda, e, f);
            const std::string prefix = wn + "|" + label + "|";
            const KripkeModel& cm = copy.model;
            std::vector<int> ids(cm.num_worlds());
            for (int v = 0; v < static_cast<int>(cm.num_worlds()); ++v) {
              const std::string name = prefix + cm.world_name(v);
              if (out.find_world(name)) throw std::logic_error("duplicate world name " + name);
              const int y = out.add_world(name);
              ids[static_cast<std::size_t>(v)] = y;
              src.push_back(sub.source[static_cast<std::size_t>(origin[static_cast<std::size_t>(v)])]);
              for (int c : cm.delta(v)) out.add_live(y, out.add_agent(cm.agent_name(c)));
              for (const auto& [p, tuples] : cm.valuation(v))
                for (const auto& tuple : tuples) {
                  AgentTuple mapped;
                  for (int c : tuple) mapped.push_back(out.add_agent(cm.agent_name(c)));
                  out.set_true(y, p, std::move(mapped));
                }
            }
            for (const auto& ed : cm.edges())
              out.add_edge(ids[static_cast<std::size_t>(ed.from)], out.add_agent(cm.agent_name(ed.agent)),
                           ids[static_cast<std::size_t>(ed.to)]);
            out.add_edge(root, out.agent(label), ids[static_cast<std::size_t>(copy.root)]);
          }
      }
    }
    out.set_root(root);
    return memo_.emplace(w, Built{as_tree(out, root), std::move(src)}).first->second;
  }

  const TreeModel& m_;
  SubformulaClosure sf_;
  std::vector<ExistentialPart> parts_;
  std::size_t q_;
  std::size_t qq_;
  std::vector<WorldTypes> types_;
  std::map<int, Built> memo_;
};

}  // namespace

CompressResult compress(const TreeModel& m, const Formula& theta) { return Compressor(m, theta).run(); }

std::optional<boost::multiprecision::cpp_int> AgentBound::exact() const {
  if (exponent > 4096) return std::nullopt;
  boost::multiprecision::cpp_int b = factor;
  b <<= static_cast<unsigned>(exponent);
  return b;
}

std::string AgentBound::describe() const {
  std::ostringstream os;
  os << factor << " * 2^" << exponent;
  if (auto e = exact()) os << " = " << *e;
  return os.str();
}

AgentBound agent_bound(const Formula& theta) {
  AgentBound b;
  b.sf_size = sf_closure(theta).size();
  b.q = is_fsnf_dnf(theta) ? existential_parts(theta).size() : 0;
  b.factor = 3 * std::max<std::size_t>(b.q, 1);
  const boost::multiprecision::cpp_int m = b.sf_size;
  b.exponent = 4 * m + (boost::multiprecision::cpp_int(1) << static_cast<unsigned>(2 * b.sf_size));
  b.log2 = std::log2(static_cast<double>(b.factor)) + static_cast<double>(b.exponent);
  return b;
}

}  // namespace tml
