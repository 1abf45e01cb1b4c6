#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "impsel/analysis.hpp"
#include "impsel/graph.hpp"
#include "impsel/json_io.hpp"
#include "impsel/mechanisms.hpp"

namespace impsel {

struct McResult {
  double mean = 0.0;
  double ci_half_width = 0.0;  // 99% Hoeffding half-width on [0, Delta_k]
};

// Mean selected total indegree over independent draws; trial t runs on the
// stream derived from (seed, t), so results are reproducible per trial.
McResult monte_carlo_expected_indegree(const MechanismSpec& spec, const Graph& g,
                                       const Prediction* p, long long trials,
                                       std::uint64_t seed);

double hoeffding_half_width(long long trials, long long delta_k);

struct EvalInstance {
  std::string id;
  Graph graph;
  Prediction prediction;
};

struct EvalRow {
  std::string instance_id;
  int n = 0;
  int k = 0;
  long long delta_k = 0;
  long long pred_indegree = 0;
  Rational eta;  // exact prediction error
  double mean = 0.0;
  double ci_half_width = 0.0;
  double ratio = 0.0;  // mean / Delta_k, 1 when Delta_k == 0
};

struct EvalReport {
  std::vector<EvalRow> rows;
  bool has_accurate = false;
  double alpha_hat = 0.0;  // min ratio over accurate-prediction instances
  double beta_hat = 0.0;   // min ratio over all instances
};

// Evaluates every instance, classifying it accurate iff the predicted set
// attains Delta_k (exact integer comparison).
EvalReport run_suite(const MechanismSpec& spec, const std::vector<EvalInstance>& instances,
                     long long trials, std::uint64_t seed);

std::string report_to_csv(const EvalReport& report);
Json report_to_json(const EvalReport& report);

struct CurveRow {
  GuaranteeKind kind;
  int k = 0;
  std::optional<Rational> rho;
  Rational alpha;
  Rational beta;
};

// Closed-form guarantee curves. Kinds parameterized by k sweep [k_min, k_max];
// kinds parameterized by rho sweep rho_set; rho-partition sweeps both.
std::vector<CurveRow> emit_curves(const std::vector<GuaranteeKind>& kinds, int k_min, int k_max,
                                  const std::vector<Rational>& rho_set);

std::string curves_to_csv(const std::vector<CurveRow>& rows);

}  // namespace impsel
