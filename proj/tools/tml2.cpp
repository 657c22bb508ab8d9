// tml2: command-line front end for the TML² toolkit.
//
// Exit codes: 0 ok, 1 usage, 2 formula error, 3 invalid model,
// 10 sat / true, 20 unsat / false, 30 resource limit.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "tml/closure.hpp"
#include "tml/decide.hpp"
#include "tml/error.hpp"
#include "tml/model_io.hpp"
#include "tml/normalform.hpp"
#include "tml/parser.hpp"
#include "tml/semantics.hpp"
#include "tml/translate.hpp"
#include "tml/types.hpp"

namespace {

using json = nlohmann::ordered_json;

constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kFormula = 2;
constexpr int kModel = 3;
constexpr int kSat = 10;
constexpr int kUnsat = 20;
constexpr int kLimit = 30;

struct Options {
  std::string formula;
  std::string formula_file;
  std::string model;
  std::string world;
  std::string assign;
  std::string max_agents = "3";
  std::size_t max_worlds = 8;
  int depth = -1;
  std::size_t jobs = 1;
  std::string dot;
  std::string out;
  std::string to = "constant";
  bool as_json = false;
  std::optional<std::size_t> budget;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CLI::ValidationError("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spit(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw CLI::ValidationError("cannot write " + path);
  out << text;
}

tml::Formula read_formula(const Options& o) {
  if (o.formula.empty() == o.formula_file.empty())
    throw CLI::ValidationError("exactly one of --formula and --formula-file is required");
  return tml::parse_formula(o.formula.empty() ? slurp(o.formula_file) : o.formula);
}

tml::KripkeModel read_model(const Options& o) {
  if (o.model.empty()) throw CLI::ValidationError("--model is required");
  return tml::load_model(o.model);
}

int pick_world(const tml::KripkeModel& m, const Options& o) {
  if (!o.world.empty()) return m.world(o.world);
  if (m.root()) return *m.root();
  if (m.num_worlds() == 0) throw tml::ModelFormatError("model has no worlds");
  return 0;
}

tml::Assignment parse_assign(const tml::KripkeModel& m, const std::string& text) {
  tml::Assignment sigma;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw CLI::ValidationError("--assign expects x=agent,y=agent");
    sigma[item.substr(0, eq)] = m.agent(item.substr(eq + 1));
  }
  return sigma;
}

std::size_t budget_or(const Options& o, std::size_t fallback) { return o.budget.value_or(fallback); }

void emit_dot(const Options& o, const tml::KripkeModel& m) {
  if (!o.dot.empty()) spit(o.dot, tml::to_dot(m));
}

int cmd_parse(const Options& o) {
  const tml::Formula f = read_formula(o);
  if (o.as_json) {
    json j;
    j["formula"] = tml::render_formula(f);
    j["size"] = f.size();
    j["modal_depth"] = tml::modal_depth(f);
    j["free_vars"] = tml::free_vars(f);
    j["sentence"] = tml::is_sentence(f);
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << tml::render_formula(f) << "\n";
  }
  return kOk;
}

int cmd_check(const Options& o) {
  const tml::Formula f = read_formula(o);
  const tml::KripkeModel m = read_model(o);
  const int w = pick_world(m, o);
  const bool v = tml::check(m, w, parse_assign(m, o.assign), f);
  if (o.as_json)
    std::cout << json{{"world", m.world_name(w)}, {"value", v}}.dump(2) << "\n";
  else
    std::cout << (v ? "true" : "false") << "\n";
  return v ? kSat : kUnsat;
}

int cmd_normalize(const Options& o) {
  const tml::Formula f = tml::to_nnf(read_formula(o));
  tml::FsnfOptions opt;
  opt.budget = budget_or(o, opt.budget);
  const tml::Formula theta = tml::to_fsnf(f, {}, opt);
  if (o.as_json) {
    json j;
    j["fsnf"] = tml::render_formula(theta);
    j["is_fsnf"] = tml::is_fsnf_dnf(theta);
    j["size"] = theta.size();
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << tml::render_formula(theta) << "\n";
  }
  return kOk;
}

int cmd_translate(const Options& o) {
  const tml::Formula f = tml::to_nnf(read_formula(o));
  tml::check_fresh(f);
  tml::Formula g;
  if (o.to == "constant")
    g = tml::conj_all({tml::gamma(f), tml::tr1(f)});
  else if (o.to == "ptml")
    g = tml::tr2_full(f);
  else
    throw CLI::ValidationError("--to expects constant or ptml");
  if (o.as_json)
    std::cout << json{{"to", o.to}, {"formula", tml::render_formula(g)}, {"size", g.size()}}.dump(2) << "\n";
  else
    std::cout << tml::render_formula(g) << "\n";
  return kOk;
}

json bound_json(const tml::AgentBound& b) {
  json j;
  j["sf_size"] = b.sf_size;
  j["q"] = b.q;
  j["factor"] = b.factor;
  j["exponent"] = b.exponent.str();
  j["log2"] = b.log2;
  if (auto e = b.exact()) j["exact"] = e->str();
  return j;
}

int cmd_solve(const Options& o) {
  const tml::Formula f = read_formula(o);
  tml::SolverConfig cfg;
  if (o.max_agents == "bound") {
    cfg.max_agents.reset();
  } else {
    try {
      cfg.max_agents = std::stoul(o.max_agents);
    } catch (const std::exception&) {
      throw CLI::ValidationError("--max-agents expects a number or 'bound'");
    }
    if (*cfg.max_agents == 0) throw CLI::ValidationError("--max-agents must be at least 1");
  }
  cfg.node_budget = budget_or(o, cfg.node_budget);
  cfg.parallel_width = o.jobs;
  const tml::SatResult r = tml::solve(f, cfg);

  json j;
  j["status"] = tml::SatResult::status_name(r.status);
  j["k"] = r.k;
  if (r.bound)
    j["bound_log2"] = r.bound->log2;
  else
    j["bound_log2"] = nullptr;
  if (r.status == tml::SatResult::Status::ResourceLimit) j["stage"] = r.stage;
  if (r.certificate) {
    emit_dot(o, r.certificate->model);
    if (!o.out.empty()) {
      spit(o.out, tml::write_model_json(r.certificate->model));
      j["certificate"] = o.out;
    } else {
      j["certificate"] = json::parse(tml::write_model_json(r.certificate->model));
    }
  }
  if (o.as_json) {
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << j["status"].get<std::string>();
    if (r.status != tml::SatResult::Status::Unsat || r.k) std::cout << " k=" << r.k;
    if (r.bound) std::cout << " bound=" << r.bound->describe();
    std::cout << "\n";
    if (r.certificate && o.out.empty()) std::cout << tml::write_model_json(r.certificate->model) << "\n";
  }
  switch (r.status) {
    case tml::SatResult::Status::Sat: return kSat;
    case tml::SatResult::Status::Unsat:
    case tml::SatResult::Status::UnsatUpTo: return kUnsat;
    case tml::SatResult::Status::ResourceLimit: return kLimit;
  }
  return kUsage;
}

int cmd_compress(const Options& o) {
  const tml::Formula theta = read_formula(o);
  const tml::KripkeModel m = read_model(o);
  const tml::TreeModel t = tml::as_tree(m, pick_world(m, o));
  const tml::CompressResult r = tml::compress(t, theta);
  emit_dot(o, r.model.model);
  json census = json::array();
  for (const auto& c : r.census)
    census.push_back({{"world", c.world},
                      {"source", c.source},
                      {"one_types", c.one_types},
                      {"type_agents", c.type_agents},
                      {"live_agents", c.live_agents}});
  json j;
  j["q"] = r.q;
  j["worlds"] = r.model.model.num_worlds();
  j["agents"] = r.model.model.num_agents();
  j["census"] = census;
  if (!o.out.empty()) {
    spit(o.out, tml::write_model_json(r.model.model));
    j["model"] = o.out;
  } else {
    j["model"] = json::parse(tml::write_model_json(r.model.model));
  }
  std::cout << j.dump(2) << "\n";
  return kOk;
}

int cmd_oracle(const Options& o) {
  const tml::Formula f = tml::to_nnf(read_formula(o));
  if (o.max_agents == "bound") throw CLI::ValidationError("oracle needs a numeric --max-agents");
  const std::size_t agents = std::stoul(o.max_agents);
  const int depth = o.depth >= 0 ? o.depth : tml::modal_depth(f);
  tml::OracleOptions opt;
  opt.budget = budget_or(o, opt.budget);
  const auto w = tml::oracle_sat(f, o.max_worlds, agents, depth, opt);
  json j;
  j["status"] = w ? "sat" : "unsat_up_to";
  if (w) {
    emit_dot(o, w->model);
    j["world"] = w->model.world_name(w->world);
    if (!o.out.empty()) {
      spit(o.out, tml::write_model_json(w->model));
      j["model"] = o.out;
    } else {
      j["model"] = json::parse(tml::write_model_json(w->model));
    }
  }
  std::cout << (o.as_json ? j.dump(2) : j["status"].get<std::string>()) << "\n";
  return w ? kSat : kUnsat;
}

int cmd_bound(const Options& o) {
  const tml::Formula f = read_formula(o);
  tml::BoundReport r = tml::theoretical_bound_report(f, budget_or(o, 200'000));
  if (o.as_json) {
    json j = bound_json(r.bound);
    j["sizes"] = {{"input", r.input_size}, {"constant", r.constant_size}, {"ptml", r.ptml_size}, {"fsnf", r.fsnf_size}};
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "B = " << r.bound.describe() << "\n"
              << "log2 B = " << r.bound.log2 << "\n"
              << "|SF| = " << r.bound.sf_size << ", q = " << r.bound.q << "\n"
              << "sizes: input " << r.input_size << ", constant " << r.constant_size << ", ptml " << r.ptml_size
              << ", fsnf " << r.fsnf_size << "\n";
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Satisfiability and model checking for two-variable term modal logic"};
  app.set_config("--config", "", "key=value configuration file; flags override it");
  app.require_subcommand(1);
  Options o;

  auto formula_opts = [&](CLI::App* c) {
    c->add_option("--formula", o.formula, "formula text");
    c->add_option("--formula-file", o.formula_file, "file holding the formula");
    c->add_flag("--json", o.as_json, "machine-readable output");
  };
  auto model_opts = [&](CLI::App* c) {
    c->add_option("--model", o.model, "model file (JSON)");
    c->add_option("--world", o.world, "world name (defaults to the model root)");
  };
  auto output_opts = [&](CLI::App* c) {
    c->add_option("--dot", o.dot, "write the produced model as Graphviz DOT");
    c->add_option("--out", o.out, "write the produced model file here");
  };

  std::map<std::string, std::function<int(const Options&)>> handlers;
  auto sub = [&](const std::string& name, const std::string& help, std::function<int(const Options&)> h) {
    CLI::App* c = app.add_subcommand(name, help);
    formula_opts(c);
    handlers[name] = std::move(h);
    return c;
  };

  sub("parse", "parse and pretty-print a formula", cmd_parse);
  {
    auto* c = sub("check", "evaluate a formula at a world of a model", cmd_check);
    model_opts(c);
    c->add_option("--assign", o.assign, "assignment x=agent,y=agent");
  }
  sub("normalize", "Fine-Scott normal form", cmd_normalize);
  sub("translate", "constant-domain or propositional translation", cmd_translate)
      ->add_option("--to", o.to, "constant | ptml")
      ->check(CLI::IsMember({"constant", "ptml"}));
  {
    auto* c = sub("solve", "decide satisfiability", cmd_solve);
    c->add_option("--max-agents", o.max_agents, "largest domain size tried, or 'bound'");
    c->add_option("--jobs", o.jobs, "domain sizes solved concurrently")->check(CLI::PositiveNumber);
    output_opts(c);
  }
  {
    auto* c = sub("compress", "bounded-agent compression of a tree model", cmd_compress);
    model_opts(c);
    output_opts(c);
  }
  {
    auto* c = sub("oracle", "exhaustive small-model search", cmd_oracle);
    c->add_option("--max-agents", o.max_agents, "agents");
    c->add_option("--max-worlds", o.max_worlds, "worlds");
    c->add_option("--depth", o.depth, "tree depth (defaults to the modal depth)");
    output_opts(c);
  }
  sub("bound", "theoretical agent bound and stage sizes", cmd_bound);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }
  if (const char* env = std::getenv("TML2_BUDGET")) {
    try {
      o.budget = std::stoul(env);
    } catch (const std::exception&) {
      std::cerr << "error: TML2_BUDGET must be a number\n";
      return kUsage;
    }
  }

  const std::string name = app.get_subcommands().front()->get_name();
  try {
    return handlers.at(name)(o);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const tml::ResourceLimit& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kLimit;
  } catch (const tml::ModelFormatError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kModel;
  } catch (const tml::UnknownWorld& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kModel;
  } catch (const tml::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFormula;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kUsage;
  }
}
