#include "impsel/json_io.hpp"

#include <fstream>
#include <sstream>

#include "impsel/errors.hpp"

namespace impsel {

Json graph_to_json(const Graph& g) {
  Json j;
  j["n"] = g.n;
  Json edges = Json::array();
  for (auto [u, v] : g.edges) edges.push_back(Json::array({u, v}));
  j["edges"] = std::move(edges);
  return j;
}

Graph graph_from_json(const Json& j) {
  try {
    if (!j.is_object() || !j.contains("n") || !j.contains("edges"))
      throw input_error("graph JSON needs fields 'n' and 'edges'");
    const int n = j.at("n").get<int>();
    std::vector<std::pair<int, int>> edges;
    for (const auto& e : j.at("edges")) {
      if (!e.is_array() || e.size() != 2) throw input_error("edge must be a pair [u,v]");
      edges.emplace_back(e.at(0).get<int>(), e.at(1).get<int>());
    }
    return Graph::from_edges(n, std::move(edges));
  } catch (const Json::exception& e) {
    throw input_error(std::string("bad graph JSON: ") + e.what());
  }
}

Json prediction_to_json(const Prediction& p) {
  Json j;
  j["vertices"] = p.vertices;
  return j;
}

Prediction prediction_from_json(const Json& j) {
  try {
    if (!j.is_object() || !j.contains("vertices"))
      throw input_error("prediction JSON needs field 'vertices'");
    Prediction p;
    p.vertices = j.at("vertices").get<std::vector<int>>();
    return p;
  } catch (const Json::exception& e) {
    throw input_error(std::string("bad prediction JSON: ") + e.what());
  }
}

Json spec_to_json(const MechanismSpec& spec) {
  Json j;
  j["kind"] = kind_id(spec.kind);
  if (spec.rho) j["rho"] = rat_str(*spec.rho);
  if (spec.k) j["k"] = *spec.k;
  if (spec.mix_weight) j["mix_weight"] = rat_str(*spec.mix_weight);
  if (spec.a) j["a"] = spec_to_json(*spec.a);
  if (spec.b) j["b"] = spec_to_json(*spec.b);
  return j;
}

MechanismSpec spec_from_json(const Json& j) {
  try {
    if (!j.is_object() || !j.contains("kind")) throw input_error("spec JSON needs field 'kind'");
    MechanismSpec spec;
    spec.kind = kind_from_id(j.at("kind").get<std::string>());
    if (j.contains("rho")) spec.rho = rat_parse(j.at("rho").get<std::string>());
    if (j.contains("k")) spec.k = j.at("k").get<int>();
    if (j.contains("mix_weight")) spec.mix_weight = rat_parse(j.at("mix_weight").get<std::string>());
    if (j.contains("a")) spec.a = std::make_shared<MechanismSpec>(spec_from_json(j.at("a")));
    if (j.contains("b")) spec.b = std::make_shared<MechanismSpec>(spec_from_json(j.at("b")));
    validate_spec(spec);
    return spec;
  } catch (const Json::exception& e) {
    throw input_error(std::string("bad mechanism spec JSON: ") + e.what());
  }
}

Json distribution_to_json(const ExactDistribution& dist) {
  Json j = Json::object();
  for (std::size_t v = 0; v < dist.probs.size(); ++v)
    j[std::to_string(v)] = rat_str(dist.probs[v]);
  return j;
}

Json distribution_envelope(const ExactDistribution& dist) {
  Json j;
  j["probs"] = distribution_to_json(dist);
  return j;
}

Json bound_report_to_json(const BoundAuditReport& report) {
  Json j;
  j["setting"] = setting_id(report.setting);
  j["mechanism"] = report.mechanism;
  j["pass"] = report.pass;
  j["alpha_hat"] = rat_str(report.alpha_hat);
  j["beta_hat"] = rat_str(report.beta_hat);
  Json pvals = Json::object();
  for (std::size_t i = 0; i < report.p_values.size(); ++i)
    pvals["p" + std::to_string(i + 1)] = rat_str(report.p_values[i]);
  j["p_values"] = std::move(pvals);
  j["linkage_ok"] = report.linkage_ok;
  if (!report.linkage_failures.empty()) j["linkage_failures"] = report.linkage_failures;
  Json instances = Json::array();
  for (const auto& row : report.instances) {
    Json r;
    r["index"] = row.index;
    r["delta_k"] = row.delta_k;
    r["predicted_indegree"] = row.predicted_indegree;
    r["accurate"] = row.accurate;
    r["expected_indegree"] = rat_str(row.expected);
    r["ratio"] = rat_str(row.ratio);
    instances.push_back(std::move(r));
  }
  j["instances"] = std::move(instances);
  Json constraints = Json::array();
  for (const auto& c : report.constraints) {
    Json r;
    r["name"] = c.name;
    r["lhs"] = rat_str(c.lhs);
    r["rhs"] = rat_str(c.rhs);
    r["pass"] = c.pass;
    constraints.push_back(std::move(r));
  }
  j["constraints"] = std::move(constraints);
  return j;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw input_error("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw input_error("cannot write file: " + path);
  out << content;
}

Graph load_graph_file(const std::string& path) {
  try {
    return graph_from_json(Json::parse(read_text_file(path)));
  } catch (const Json::exception& e) {
    throw input_error("cannot parse graph file " + path + ": " + e.what());
  }
}

}  // namespace impsel
