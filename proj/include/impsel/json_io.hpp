#pragma once

#include <string>

#include "json.hpp"

#include "impsel/graph.hpp"
#include "impsel/mechanisms.hpp"
#include "impsel/oracle.hpp"

namespace impsel {

using Json = nlohmann::ordered_json;

// Graph files: {"n": int, "edges": [[u,v], ...]}; edges are emitted sorted
// lexicographically, input order is not significant.
Json graph_to_json(const Graph& g);
Graph graph_from_json(const Json& j);

// Prediction files: {"vertices": [..]}.
Json prediction_to_json(const Prediction& p);
Prediction prediction_from_json(const Json& j);

// Mechanism specs: {"kind": str, "rho": "p/q", "k": int, "mix_weight": "p/q",
// "a": spec, "b": spec}; rationals as strings, absent fields omitted.
Json spec_to_json(const MechanismSpec& spec);
MechanismSpec spec_from_json(const Json& j);

// Bare probability map {"0": "2/3", ...}; probs_envelope wraps it as
// {"probs": {...}} for embedding in report documents.
Json distribution_to_json(const ExactDistribution& dist);
Json distribution_envelope(const ExactDistribution& dist);

Json bound_report_to_json(const BoundAuditReport& report);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

Graph load_graph_file(const std::string& path);

}  // namespace impsel
