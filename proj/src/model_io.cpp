#include "tml/model_io.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

#include "tml/error.hpp"

namespace tml {

using nlohmann::json;

namespace {

const json& require(const json& j, const char* key) {
  if (!j.contains(key)) throw ModelFormatError(std::string("missing key '") + key + "'");
  return j.at(key);
}

std::string as_string(const json& j, const std::string& what) {
  if (!j.is_string()) throw ModelFormatError(what + " must be a string");
  return j.get<std::string>();
}

}  // namespace

KripkeModel read_model_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ModelFormatError(std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ModelFormatError("model must be a JSON object");
  static const std::set<std::string> keys{"worlds", "agents", "delta", "edges", "valuation", "root"};
  for (const auto& [k, _] : j.items())
    if (!keys.contains(k)) throw ModelFormatError("unknown key '" + k + "'");

  KripkeModel m;
  const auto& worlds = require(j, "worlds");
  const auto& agents = require(j, "agents");
  if (!worlds.is_array() || !agents.is_array()) throw ModelFormatError("worlds and agents must be arrays");
  for (const auto& w : worlds) m.add_world(as_string(w, "world"));
  for (const auto& a : agents) m.add_agent(as_string(a, "agent"));
  auto world = [&](const json& v) {
    auto w = m.find_world(as_string(v, "world"));
    if (!w) throw ModelFormatError("undeclared world '" + v.get<std::string>() + "'");
    return *w;
  };
  auto agent = [&](const json& v) {
    auto a = m.find_agent(as_string(v, "agent"));
    if (!a) throw ModelFormatError("undeclared agent '" + v.get<std::string>() + "'");
    return *a;
  };

  const auto& delta = require(j, "delta");
  if (!delta.is_object()) throw ModelFormatError("delta must be an object");
  for (const auto& [w, as] : delta.items()) {
    int wi = world(json(w));
    if (!as.is_array()) throw ModelFormatError("delta entries must be arrays");
    for (const auto& a : as) m.add_live(wi, agent(a));
  }
  const auto& edges = require(j, "edges");
  if (!edges.is_array()) throw ModelFormatError("edges must be an array");
  for (const auto& e : edges) {
    if (!e.is_array() || e.size() != 3) throw ModelFormatError("edge must be [world, agent, world]");
    m.add_edge(world(e[0]), agent(e[1]), world(e[2]));
  }
  const auto& val = require(j, "valuation");
  if (!val.is_object()) throw ModelFormatError("valuation must be an object");
  for (const auto& [w, preds] : val.items()) {
    int wi = world(json(w));
    if (!preds.is_object()) throw ModelFormatError("valuation entries must be objects");
    for (const auto& [p, tuples] : preds.items()) {
      if (!tuples.is_array()) throw ModelFormatError("predicate extension must be an array of tuples");
      for (const auto& t : tuples) {
        if (!t.is_array()) throw ModelFormatError("tuple must be an array");
        AgentTuple tup;
        for (const auto& a : t) tup.push_back(agent(a));
        m.set_true(wi, p, std::move(tup));
      }
    }
  }
  if (j.contains("root")) m.set_root(world(j.at("root")));
  return m;
}

KripkeModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ModelFormatError("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return read_model_json(ss.str());
}

std::string write_model_json(const KripkeModel& m) {
  json j;
  j["worlds"] = json::array();
  j["agents"] = json::array();
  j["delta"] = json::object();
  j["edges"] = json::array();
  j["valuation"] = json::object();
  for (std::size_t a = 0; a < m.num_agents(); ++a) j["agents"].push_back(m.agent_name(static_cast<int>(a)));
  for (int w = 0; w < static_cast<int>(m.num_worlds()); ++w) {
    const auto& name = m.world_name(w);
    j["worlds"].push_back(name);
    json live = json::array();
    for (int a : m.delta(w)) live.push_back(m.agent_name(a));
    j["delta"][name] = live;
    json preds = json::object();
    for (const auto& [p, tuples] : m.valuation(w)) {
      json ts = json::array();
      for (const auto& t : tuples) {
        json tj = json::array();
        for (int a : t) tj.push_back(m.agent_name(a));
        ts.push_back(tj);
      }
      preds[p] = ts;
    }
    if (!preds.empty()) j["valuation"][name] = preds;
  }
  for (const auto& e : m.edges())
    j["edges"].push_back({m.world_name(e.from), m.agent_name(e.agent), m.world_name(e.to)});
  if (m.root()) j["root"] = m.world_name(*m.root());
  return j.dump(2);
}

namespace {

std::string dot_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

}  // namespace

std::string to_dot(const KripkeModel& m) {
  std::ostringstream os;
  os << "digraph model {\n  node [shape=box];\n";
  for (int w = 0; w < static_cast<int>(m.num_worlds()); ++w) {
    std::string label = dot_escape(m.world_name(w)) + "\\n{";
    bool first = true;
    for (int a : m.delta(w)) {
      label += (first ? "" : ",") + dot_escape(m.agent_name(a));
      first = false;
    }
    label += "}";
    for (const auto& [p, tuples] : m.valuation(w))
      for (const auto& t : tuples) {
        label += "\\n" + dot_escape(p);
        if (!t.empty()) {
          label += "(";
          for (std::size_t i = 0; i < t.size(); ++i) label += (i ? "," : "") + dot_escape(m.agent_name(t[i]));
          label += ")";
        }
      }
    os << "  w" << w << " [label=\"" << label << "\"";
    if (m.root() && *m.root() == w) os << ", peripheries=2";
    os << "];\n";
  }
  for (const auto& e : m.edges())
    os << "  w" << e.from << " -> w" << e.to << " [label=\"" << dot_escape(m.agent_name(e.agent)) << "\"];\n";
  os << "}\n";
  return os.str();
}

}  // namespace tml
