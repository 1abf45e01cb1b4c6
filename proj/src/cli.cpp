#include "impsel/cli.hpp"

#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "impsel/analysis.hpp"
#include "impsel/errors.hpp"
#include "impsel/eval.hpp"
#include "impsel/graph.hpp"
#include "impsel/json_io.hpp"
#include "impsel/mechanisms.hpp"
#include "impsel/oracle.hpp"

namespace impsel {

namespace {

constexpr int kExitOk = 0;
constexpr int kExitAuditFailed = 1;
constexpr int kExitInputError = 2;

struct CommonOpts {
  std::uint64_t seed = 12345;
  long long trials = 100000;
  std::string rho;
  int k = 0;
  bool k_set = false;
  std::string out;
  std::string format = "json";

  std::string mech;
  std::string mech_file;
  std::vector<std::string> graph_files;
  std::string pred_csv;
  std::string family;
  int n = 0;
  bool n_set = false;
};

std::vector<int> parse_int_list(const std::string& csv) {
  std::vector<int> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      out.push_back(std::stoi(item));
    } catch (const std::exception&) {
      throw input_error("bad integer list: '" + csv + "'");
    }
  }
  if (out.empty()) throw input_error("empty integer list");
  return out;
}

std::vector<Rational> parse_rat_list(const std::string& csv) {
  std::vector<Rational> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(rat_parse(item));
  }
  if (out.empty()) throw input_error("empty rational list");
  return out;
}

MechanismSpec build_spec(const CommonOpts& opts) {
  if (!opts.mech_file.empty())
    return spec_from_json(Json::parse(read_text_file(opts.mech_file), nullptr, true, true));
  if (opts.mech.empty()) throw input_error("need --mech or --mech-file");
  MechanismSpec spec;
  spec.kind = kind_from_id(opts.mech);
  if (spec.kind == MechanismKind::Lottery)
    throw input_error("lottery specs must be given via --mech-file");
  const bool uses_rho =
      spec.kind == MechanismKind::RhoPermutation || spec.kind == MechanismKind::RhoPartition;
  if (uses_rho) {
    if (opts.rho.empty()) throw input_error(opts.mech + " needs --rho p/q");
    spec.rho = rat_parse(opts.rho);
  }
  if (opts.k_set) spec.k = opts.k;
  if (spec.kind == MechanismKind::KPartitionBaseline && !spec.k)
    throw input_error("k-partition-baseline needs --k");
  validate_spec(spec);
  return spec;
}

void emit(const CommonOpts& opts, const std::string& text) {
  if (!opts.out.empty())
    write_text_file(opts.out, text);
  else
    std::cout << text;
}

std::optional<Prediction> parse_prediction(const CommonOpts& opts) {
  if (opts.pred_csv.empty()) return std::nullopt;
  return Prediction{parse_int_list(opts.pred_csv)};
}

std::vector<EvalInstance> collect_instances(const CommonOpts& opts, int random_count,
                                            double edge_prob, bool plurality,
                                            const std::string& pred_mode) {
  std::vector<EvalInstance> instances;
  if (!opts.family.empty()) {
    const InstanceFamily fam = family_from_id(opts.family);
    const auto figs =
        opts.n_set ? gen_figure_family(fam, opts.n) : gen_figure_family(fam);
    for (std::size_t i = 0; i < figs.size(); ++i)
      instances.push_back({opts.family + "-" + std::to_string(i + 1), figs[i].graph,
                           figs[i].prediction});
    return instances;
  }
  if (!opts.graph_files.empty()) {
    const auto pred = parse_prediction(opts);
    if (!pred) throw input_error("--graph instances need --pred");
    for (const auto& path : opts.graph_files) {
      Graph g = load_graph_file(path);
      instances.push_back({path, std::move(g), *pred});
    }
    return instances;
  }
  if (random_count > 0) {
    if (!opts.n_set) throw input_error("random instances need --n");
    const auto pred = parse_prediction(opts);
    int k = opts.k_set ? opts.k : (pred ? pred->k() : 1);
    for (int i = 0; i < random_count; ++i) {
      const std::uint64_t seed = Rng(opts.seed, 1000 + static_cast<std::uint64_t>(i)).next_u64();
      Graph g = plurality ? gen_random_plurality(opts.n, seed)
                          : gen_random(opts.n, edge_prob, seed);
      Prediction p;
      if (pred_mode == "optimal") {
        p.vertices = max_k_indegree(g, k).witness;
      } else if (pred_mode == "first") {
        for (int v = 0; v < k; ++v) p.vertices.push_back(v);
      } else {
        throw input_error("unknown --pred-mode: '" + pred_mode + "'");
      }
      instances.push_back({"random-" + std::to_string(i + 1), std::move(g), std::move(p)});
    }
    return instances;
  }
  throw input_error("no instance source: use --family, --graph, or --random-instances");
}

int cmd_gen(const CommonOpts& opts, double edge_prob, const std::string& out_dir) {
  if (opts.family.empty()) throw input_error("gen needs --family");
  if (opts.family == "random" || opts.family == "plurality") {
    if (!opts.n_set) throw input_error("gen needs --n");
    const Graph g = opts.family == "random" ? gen_random(opts.n, edge_prob, opts.seed)
                                            : gen_random_plurality(opts.n, opts.seed);
    emit(opts, graph_to_json(g).dump(2) + "\n");
    return kExitOk;
  }
  const InstanceFamily fam = family_from_id(opts.family);
  const auto figs = opts.n_set ? gen_figure_family(fam, opts.n) : gen_figure_family(fam);
  const std::string dir = out_dir.empty() ? "." : out_dir;
  for (std::size_t i = 0; i < figs.size(); ++i) {
    const std::string path = dir + "/" + opts.family + "-" + std::to_string(i + 1) + ".json";
    write_text_file(path, graph_to_json(figs[i].graph).dump(2) + "\n");
    std::cout << path << "\n";
  }
  const std::string pred_path = dir + "/" + opts.family + "-pred.json";
  write_text_file(pred_path, prediction_to_json(figs[0].prediction).dump(2) + "\n");
  std::cout << pred_path << "\n";
  return kExitOk;
}

int cmd_run(const CommonOpts& opts) {
  if (opts.graph_files.size() != 1) throw input_error("run needs exactly one --graph");
  const MechanismSpec spec = build_spec(opts);
  const Graph g = load_graph_file(opts.graph_files[0]);
  const auto pred = parse_prediction(opts);
  Rng rng(opts.seed);
  const std::vector<int> selected = execute_draw(spec, g, pred ? &*pred : nullptr, rng);
  Json j;
  j["selected"] = selected;
  emit(opts, j.dump() + "\n");
  return kExitOk;
}

int cmd_exact(const CommonOpts& opts) {
  if (opts.graph_files.size() != 1) throw input_error("exact needs exactly one --graph");
  const MechanismSpec spec = build_spec(opts);
  const Graph g = load_graph_file(opts.graph_files[0]);
  const auto pred = parse_prediction(opts);
  const ExactDistribution dist = exact_distribution(spec, g, pred ? &*pred : nullptr);
  emit(opts, distribution_to_json(dist).dump() + "\n");
  return kExitOk;
}

int cmd_audit_impartiality(const CommonOpts& opts, bool plurality_mode, int vertex,
                           bool vertex_set) {
  const MechanismSpec spec = build_spec(opts);
  const auto instances = collect_instances(opts, 0, 0.0, false, "optimal");
  bool all_ok = true;
  Json results = Json::array();
  for (const auto& inst : instances) {
    const Prediction* p = spec_needs_prediction(spec) ? &inst.prediction : nullptr;
    std::vector<int> vertices;
    if (vertex_set)
      vertices.push_back(vertex);
    else
      for (int v = 0; v < inst.graph.n; ++v) vertices.push_back(v);
    for (int v : vertices) {
      const bool ok = impartiality_audit(spec, inst.graph, p, v, plurality_mode);
      all_ok = all_ok && ok;
      Json r;
      r["instance"] = inst.id;
      r["vertex"] = v;
      r["impartial"] = ok;
      results.push_back(std::move(r));
      std::cout << (ok ? "ok   " : "FAIL ") << inst.id << " vertex " << v << "\n";
    }
  }
  if (!opts.out.empty()) {
    Json j;
    j["mechanism"] = spec.describe();
    j["pass"] = all_ok;
    j["results"] = std::move(results);
    write_text_file(opts.out, j.dump(2) + "\n");
  }
  return all_ok ? kExitOk : kExitAuditFailed;
}

int cmd_audit_bounds(const CommonOpts& opts, const std::string& setting_str) {
  const MechanismSpec spec = build_spec(opts);
  const BoundSetting setting = setting_from_id(setting_str);
  const BoundAuditReport report = bound_audit(setting, spec);
  for (const auto& c : report.constraints)
    std::cout << (c.pass ? "ok   " : "FAIL ") << c.name << "  [" << rat_str(c.lhs)
              << " <= " << rat_str(c.rhs) << "]\n";
  if (!report.linkage_ok)
    for (const auto& f : report.linkage_failures) std::cout << "FAIL linkage: " << f << "\n";
  std::cout << "alpha_hat=" << rat_str(report.alpha_hat)
            << " beta_hat=" << rat_str(report.beta_hat) << " pass=" << (report.pass ? "yes" : "no")
            << "\n";
  if (!opts.out.empty()) write_text_file(opts.out, bound_report_to_json(report).dump(2) + "\n");
  return report.pass ? kExitOk : kExitAuditFailed;
}

int cmd_audit_claims(const CommonOpts& opts, int k_max, int g_k_max, int corr_n) {
  bool ok = true;
  // closed form versus the double-sum route, exact equality
  for (int k = 1; k <= k_max && ok; ++k)
    for (int p = 0; p <= k - 1; ++p)
      if (claim3_closed(k, p) != claim3_direct(k, p)) {
        std::cout << "FAIL claim3 identity at k=" << k << " p=" << p << "\n";
        ok = false;
        break;
      }
  if (ok) std::cout << "ok   claim3 closed == direct for k <= " << k_max << "\n";

  bool mono = true;
  for (int k = 1; k <= g_k_max; ++k)
    if (!g_monotone_check(k)) {
      std::cout << "FAIL g not non-increasing at k=" << k << "\n";
      mono = false;
      break;
    }
  if (mono) std::cout << "ok   g non-increasing for k <= " << g_k_max << "\n";
  ok = ok && mono;

  bool tail = true;
  for (int k = 2; k <= 10; ++k)
    if (g_value(k, k - 1) != rat(k + 1, 2 * static_cast<long>(k))) {
      std::cout << "FAIL g(k,k-1) != (k+1)/(2k) at k=" << k << "\n";
      tail = false;
    }
  if (tail) std::cout << "ok   g(k,k-1) == (k+1)/(2k) for k <= 10\n";
  ok = ok && tail;

  // correlation inequality over every plurality graph on corr_n vertices
  if (corr_n < 2 || corr_n > 6) throw input_error("--corr-n must be in [2,6]");
  long long checked = 0;
  bool corr_ok = true;
  std::vector<int> targets(corr_n, 0);
  while (true) {
    std::vector<std::pair<int, int>> edges;
    bool valid = true;
    for (int u = 0; u < corr_n; ++u) {
      int t = targets[u] >= u ? targets[u] + 1 : targets[u];
      if (t >= corr_n) {
        valid = false;
        break;
      }
      edges.emplace_back(u, t);
    }
    if (valid) {
      const Graph g = Graph::from_edges(corr_n, edges);
      for (int pred = 0; pred < corr_n && corr_ok; ++pred)
        for (int i = 0; i < corr_n && corr_ok; ++i) {
          if (i == pred) continue;
          const int bound = indegree(g, i) - (g.has_edge(pred, i) ? 1 : 0);
          for (int r = 1; r <= bound && corr_ok; ++r)
            for (int s = 0; s < r && corr_ok; ++s) {
              ++checked;
              if (!correlation_audit(g, pred, i, r, s)) {
                std::cout << "FAIL correlation at pred=" << pred << " i=" << i << " r=" << r
                          << " s=" << s << "\n";
                corr_ok = false;
              }
            }
        }
    }
    int pos = corr_n - 1;
    while (pos >= 0 && targets[pos] == corr_n - 2) targets[pos--] = 0;
    if (pos < 0) break;
    ++targets[pos];
  }
  if (corr_ok)
    std::cout << "ok   correlation inequality on all plurality graphs with n=" << corr_n << " ("
              << checked << " triples)\n";
  ok = ok && corr_ok;
  (void)opts;
  return ok ? kExitOk : kExitAuditFailed;
}

int cmd_eval(const CommonOpts& opts, int random_count, double edge_prob, bool plurality,
             const std::string& pred_mode) {
  const MechanismSpec spec = build_spec(opts);
  const auto instances = collect_instances(opts, random_count, edge_prob, plurality, pred_mode);
  const EvalReport report = run_suite(spec, instances, opts.trials, opts.seed);
  if (opts.format == "csv")
    emit(opts, report_to_csv(report));
  else
    emit(opts, report_to_json(report).dump(2) + "\n");
  return kExitOk;
}

int cmd_curves(const CommonOpts& opts, const std::string& kinds_csv, int k_min, int k_max,
               const std::string& rho_csv) {
  std::vector<GuaranteeKind> kinds;
  std::stringstream ss(kinds_csv);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) kinds.push_back(guarantee_kind_from_id(item));
  if (kinds.empty()) throw input_error("empty kind list");
  const std::vector<Rational> rho_set = parse_rat_list(rho_csv);
  const auto rows = emit_curves(kinds, k_min, k_max, rho_set);
  emit(opts, curves_to_csv(rows));
  return kExitOk;
}

}  // namespace

int cli_main(int argc, const char* const* argv) {
  CLI::App app{"Impartial k-selection mechanisms with predictions: generators, exact "
               "distributions, impartiality/bound/claim audits, Monte Carlo evaluation"};
  app.require_subcommand(1);
  app.fallthrough();

  CommonOpts opts;
  app.add_option("--seed", opts.seed, "random seed");
  app.add_option("--trials", opts.trials, "Monte Carlo trials");
  app.add_option("--rho", opts.rho, "confidence parameter as a rational p/q");
  auto* k_opt = app.add_option("--k", opts.k, "selection size");
  app.add_option("--out", opts.out, "output file (default stdout)");
  app.add_option("--format", opts.format, "json or csv")
      ->check(CLI::IsMember({"json", "csv"}));

  double edge_prob = 0.5;
  std::string out_dir;
  auto* gen = app.add_subcommand("gen", "generate instances (random, plurality, fig3..fig6)");
  gen->add_option("--family", opts.family, "random | plurality | fig3 | fig4 | fig5 | fig6")
      ->required();
  auto* n_opt = gen->add_option("--n", opts.n, "vertex count");
  gen->add_option("--edge-prob", edge_prob, "edge probability for random graphs");
  gen->add_option("--out-dir", out_dir, "directory for figure family files");

  auto* run = app.add_subcommand("run", "one draw of a mechanism");
  run->add_option("--mech", opts.mech, "mechanism kind");
  run->add_option("--mech-file", opts.mech_file, "mechanism spec JSON file");
  run->add_option("--graph", opts.graph_files, "graph JSON file");
  run->add_option("--pred", opts.pred_csv, "predicted vertices, comma separated");

  auto* exact = app.add_subcommand("exact", "exact selection distribution");
  exact->add_option("--mech", opts.mech, "mechanism kind");
  exact->add_option("--mech-file", opts.mech_file, "mechanism spec JSON file");
  exact->add_option("--graph", opts.graph_files, "graph JSON file");
  exact->add_option("--pred", opts.pred_csv, "predicted vertices, comma separated");

  bool plurality_mode = false;
  int vertex = 0;
  auto* ai = app.add_subcommand("audit-impartiality",
                                "check selection probabilities ignore own nominations");
  ai->add_option("--mech", opts.mech, "mechanism kind");
  ai->add_option("--mech-file", opts.mech_file, "mechanism spec JSON file");
  ai->add_option("--graph", opts.graph_files, "graph JSON file");
  ai->add_option("--pred", opts.pred_csv, "predicted vertices");
  ai->add_option("--family", opts.family, "figure family id");
  ai->add_flag("--plurality-mode", plurality_mode, "vary single out-targets only");
  auto* vertex_opt = ai->add_option("--vertex", vertex, "audit only this vertex");

  std::string setting_str;
  auto* ab = app.add_subcommand("audit-bounds", "feasibility-region audit on a figure family");
  ab->add_option("--setting", setting_str, "sel1 | sel1-plurality | sel2 | sel3")->required();
  ab->add_option("--mech", opts.mech, "mechanism kind");
  ab->add_option("--mech-file", opts.mech_file, "mechanism spec JSON file");

  int k_max = 25, g_k_max = 100, corr_n = 4;
  auto* ac = app.add_subcommand("audit-claims",
                                "claim identities, monotonicity, correlation inequality");
  ac->add_option("--k-max", k_max, "check the closed form up to this k");
  ac->add_option("--g-k-max", g_k_max, "check monotonicity up to this k");
  ac->add_option("--corr-n", corr_n, "plurality graph size for the correlation sweep");

  int random_count = 0;
  bool plurality_instances = false;
  std::string pred_mode = "optimal";
  auto* ev = app.add_subcommand("eval", "Monte Carlo consistency/robustness suite");
  ev->add_option("--mech", opts.mech, "mechanism kind");
  ev->add_option("--mech-file", opts.mech_file, "mechanism spec JSON file");
  ev->add_option("--graph", opts.graph_files, "graph JSON files");
  ev->add_option("--pred", opts.pred_csv, "predicted vertices for --graph instances");
  ev->add_option("--family", opts.family, "figure family id");
  ev->add_option("--random-instances", random_count, "number of random instances");
  auto* ev_n = ev->add_option("--n", opts.n, "vertex count for random instances");
  ev->add_option("--edge-prob", edge_prob, "edge probability for random instances");
  ev->add_flag("--plurality", plurality_instances, "random plurality instances");
  ev->add_option("--pred-mode", pred_mode, "optimal | first");

  std::string kinds_csv = "rho-partition,k-partition-baseline";
  int k_min = 2, k_hi = 10;
  std::string rho_csv = "1/2,3/4,1";
  auto* cv = app.add_subcommand("curves", "closed-form guarantee curves as CSV");
  cv->add_option("--kinds", kinds_csv, "comma separated guarantee kinds");
  cv->add_option("--k-min", k_min, "smallest k");
  cv->add_option("--k-max", k_hi, "largest k");
  cv->add_option("--rho-set", rho_csv, "comma separated rationals");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInputError;
  }

  opts.k_set = k_opt->count() > 0;
  opts.n_set = n_opt->count() > 0 || ev_n->count() > 0;

  try {
    if (gen->parsed()) return cmd_gen(opts, edge_prob, out_dir);
    if (run->parsed()) return cmd_run(opts);
    if (exact->parsed()) return cmd_exact(opts);
    if (ai->parsed())
      return cmd_audit_impartiality(opts, plurality_mode, vertex, vertex_opt->count() > 0);
    if (ab->parsed()) return cmd_audit_bounds(opts, setting_str);
    if (ac->parsed()) return cmd_audit_claims(opts, k_max, g_k_max, corr_n);
    if (ev->parsed())
      return cmd_eval(opts, random_count, edge_prob, plurality_instances, pred_mode);
    if (cv->parsed()) return cmd_curves(opts, kinds_csv, k_min, k_hi, rho_csv);
  } catch (const input_error& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const budget_error& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return kExitInputError;
  } catch (const Json::exception& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInputError;
  }
  return kExitInputError;
}

}  // namespace impsel
