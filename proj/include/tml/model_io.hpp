// JSON model files and Graphviz output.
//
//   {"worlds": [...], "agents": [...], "delta": {w: [a...]},
//    "edges": [[w, a, v]...], "valuation": {w: {P: [[a...]...]}}, "root": w}
//
// "root" is optional; every other key is required and unknown keys are rejected.

#pragma once

#include <iosfwd>
#include <string>

#include "tml/model.hpp"

namespace tml {

KripkeModel read_model_json(const std::string& text);
KripkeModel load_model(const std::string& path);
std::string write_model_json(const KripkeModel& m);

/// Nodes are labelled with name and true atoms, edges with their agent.
std::string to_dot(const KripkeModel& m);

}  // namespace tml
