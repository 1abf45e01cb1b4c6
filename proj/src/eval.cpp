#include "impsel/eval.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "impsel/errors.hpp"
#include "impsel/rng.hpp"

namespace impsel {

double hoeffding_half_width(long long trials, long long delta_k) {
  if (trials < 1) throw input_error("trials must be at least 1");
  return std::sqrt(std::log(2.0 / 0.01) / (2.0 * static_cast<double>(trials))) *
         static_cast<double>(delta_k);
}

McResult monte_carlo_expected_indegree(const MechanismSpec& spec, const Graph& g,
                                       const Prediction* p, long long trials,
                                       std::uint64_t seed) {
  if (trials < 1) throw input_error("trials must be at least 1");
  validate_spec(spec);
  const int k = mechanism_k(spec, p);
  const long long delta = max_k_indegree(g, std::min(k, g.n)).delta;
  long long total = 0;
  for (long long t = 0; t < trials; ++t) {
    Rng rng(seed, static_cast<std::uint64_t>(t));
    total += set_indegree(g, execute_draw(spec, g, p, rng));
  }
  McResult result;
  result.mean = static_cast<double>(total) / static_cast<double>(trials);
  result.ci_half_width = hoeffding_half_width(trials, delta);
  return result;
}

EvalReport run_suite(const MechanismSpec& spec, const std::vector<EvalInstance>& instances,
                     long long trials, std::uint64_t seed) {
  if (instances.empty()) throw input_error("instance list must be nonempty");
  EvalReport report;
  bool first_overall = true;
  for (std::size_t idx = 0; idx < instances.size(); ++idx) {
    const auto& inst = instances[idx];
    validate_prediction(inst.graph, inst.prediction);
    const int k = mechanism_k(spec, &inst.prediction);
    if (k != inst.prediction.k())
      throw input_error("instance " + inst.id + ": prediction size does not match mechanism");

    EvalRow row;
    row.instance_id = inst.id;
    row.n = inst.graph.n;
    row.k = k;
    row.delta_k = max_k_indegree(inst.graph, k).delta;
    row.pred_indegree = set_indegree(inst.graph, inst.prediction.vertices);
    row.eta = prediction_error(inst.graph, inst.prediction);

    const std::uint64_t instance_seed = Rng(seed, static_cast<std::uint64_t>(idx)).next_u64();
    const McResult mc =
        monte_carlo_expected_indegree(spec, inst.graph, &inst.prediction, trials, instance_seed);
    row.mean = mc.mean;
    row.ci_half_width = mc.ci_half_width;
    row.ratio = row.delta_k > 0 ? row.mean / static_cast<double>(row.delta_k) : 1.0;

    const bool accurate = row.pred_indegree == row.delta_k;
    if (accurate && (!report.has_accurate || row.ratio < report.alpha_hat)) {
      report.alpha_hat = row.ratio;
      report.has_accurate = true;
    }
    if (first_overall || row.ratio < report.beta_hat) {
      report.beta_hat = row.ratio;
      first_overall = false;
    }
    report.rows.push_back(std::move(row));
  }
  return report;
}

namespace {

std::string fmt_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", x);
  return buf;
}

}  // namespace

std::string report_to_csv(const EvalReport& report) {
  std::ostringstream out;
  out << "instance_id,n,k,delta_k,pred_indegree,eta,mean,ci,ratio\n";
  for (const auto& row : report.rows) {
    out << row.instance_id << ',' << row.n << ',' << row.k << ',' << row.delta_k << ','
        << row.pred_indegree << ',' << fmt_double(rat_double(row.eta)) << ','
        << fmt_double(row.mean) << ',' << fmt_double(row.ci_half_width) << ','
        << fmt_double(row.ratio) << '\n';
  }
  out << "# alpha_hat=" << (report.has_accurate ? fmt_double(report.alpha_hat) : "n/a")
      << " beta_hat=" << fmt_double(report.beta_hat) << '\n';
  return out.str();
}

Json report_to_json(const EvalReport& report) {
  Json j;
  Json rows = Json::array();
  for (const auto& row : report.rows) {
    Json r;
    r["instance_id"] = row.instance_id;
    r["n"] = row.n;
    r["k"] = row.k;
    r["delta_k"] = row.delta_k;
    r["pred_indegree"] = row.pred_indegree;
    r["eta"] = rat_str(row.eta);
    r["mean"] = row.mean;
    r["ci"] = row.ci_half_width;
    r["ratio"] = row.ratio;
    rows.push_back(std::move(r));
  }
  j["rows"] = std::move(rows);
  if (report.has_accurate) j["alpha_hat"] = report.alpha_hat;
  j["beta_hat"] = report.beta_hat;
  return j;
}

std::vector<CurveRow> emit_curves(const std::vector<GuaranteeKind>& kinds, int k_min, int k_max,
                                  const std::vector<Rational>& rho_set) {
  if (k_min < 1 || k_max < k_min) throw input_error("bad k range");
  std::vector<CurveRow> rows;
  auto push = [&](GuaranteeKind kind, int k, std::optional<Rational> rho) {
    GuaranteeParams params;
    params.rho = rho;
    params.k = k;
    const GuaranteePair pair = guarantee_pair(kind, params);
    rows.push_back({kind, k, rho, pair.alpha, pair.beta});
  };
  for (GuaranteeKind kind : kinds) {
    switch (kind) {
      case GuaranteeKind::RhoPermutation:
      case GuaranteeKind::PluralityMixture:
        for (const auto& rho : rho_set) push(kind, 1, rho);
        break;
      case GuaranteeKind::UniformPermutation:
      case GuaranteeKind::OnePermutationPlurality: push(kind, 1, std::nullopt); break;
      case GuaranteeKind::FixedBidirectional: push(kind, 2, std::nullopt); break;
      case GuaranteeKind::RandomizedK2Mixture:
        for (const auto& rho : rho_set) push(kind, 2, rho);
        break;
      case GuaranteeKind::DetK:
        for (int k = std::max(2, k_min); k <= k_max; ++k) push(kind, k, std::nullopt);
        break;
      case GuaranteeKind::RhoPartition:
        for (int k = k_min; k <= k_max; ++k)
          for (const auto& rho : rho_set) push(kind, k, rho);
        break;
      case GuaranteeKind::KPartitionBaseline:
      case GuaranteeKind::TrivialPredicted:
        for (int k = k_min; k <= k_max; ++k) push(kind, k, std::nullopt);
        break;
    }
  }
  return rows;
}

std::string curves_to_csv(const std::vector<CurveRow>& rows) {
  std::ostringstream out;
  out << "kind,k,rho,alpha,alpha_decimal,beta,beta_decimal\n";
  for (const auto& row : rows) {
    out << guarantee_kind_id(row.kind) << ',' << row.k << ','
        << (row.rho ? rat_str(*row.rho) : "") << ',' << rat_str(row.alpha) << ','
        << fmt_double(rat_double(row.alpha)) << ',' << rat_str(row.beta) << ','
        << fmt_double(rat_double(row.beta)) << '\n';
  }
  return out.str();
}

}  // namespace impsel
