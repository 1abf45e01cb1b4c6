#include <algorithm>
#include <cmath>
#include <map>

#include "doctest.h"
#include "impsel/errors.hpp"
#include "impsel/eval.hpp"
#include "impsel/graph.hpp"
#include "impsel/json_io.hpp"
#include "impsel/mechanisms.hpp"
#include "impsel/oracle.hpp"
#include "impsel/rng.hpp"

using namespace impsel;

namespace {

Graph make(int n, std::vector<std::pair<int, int>> edges) {
  return Graph::from_edges(n, std::move(edges));
}

// Test-local enumeration of the uniform permutation rule over all n! orders.
ExactDistribution brute_uniform(const Graph& g) {
  std::vector<int> perm(g.n);
  for (int i = 0; i < g.n; ++i) perm[i] = i;
  std::vector<long long> counts(g.n, 0);
  long long total = 0;
  do {
    ++counts[permutation_select_perm(g, perm)];
    ++total;
  } while (std::next_permutation(perm.begin(), perm.end()));
  ExactDistribution dist;
  for (int v = 0; v < g.n; ++v) dist.probs.push_back(rat(counts[v]) / rat(total));
  return dist;
}

// Broken variant of the candidate scan: the takeover test fails to discount a
// nomination coming from the current candidate.
int mutant_select(const Graph& g, const std::vector<int>& perm) {
  std::vector<int> pos(g.n, -1);
  for (std::size_t r = 0; r < perm.size(); ++r) pos[perm[r]] = static_cast<int>(r);
  int candidate = perm[0];
  int d = 0;
  for (int w : g.in_adj[candidate])
    if (pos[w] == -1) ++d;
  for (std::size_t r = 1; r < perm.size(); ++r) {
    const int i = perm[r];
    int seen = 0;
    for (int w : g.in_adj[i])
      if (pos[w] == -1 || pos[w] < static_cast<int>(r)) ++seen;
    if (seen >= d) {  // no exclusion of the candidate's nomination
      candidate = i;
      d = seen;
    }
  }
  return candidate;
}

Rational mutant_prob(const Graph& g, int vertex) {
  std::vector<int> perm(g.n);
  for (int i = 0; i < g.n; ++i) perm[i] = i;
  long long hits = 0, total = 0;
  do {
    if (mutant_select(g, perm) == vertex) ++hits;
    ++total;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return rat(hits) / rat(total);
}

}  // namespace

TEST_CASE("exact distribution frozen values") {
  const Graph g10 = make(2, {{1, 0}});
  const Prediction p0{{0}};

  const auto rho23 = exact_distribution(MechanismSpec::rho_permutation(rat(2, 3)), g10, &p0);
  CHECK(rho23.probs[0] == rat(2, 3));
  CHECK(rho23.probs[1] == rat(1, 3));

  const auto rho1 = exact_distribution(MechanismSpec::rho_permutation(rat(1)), g10, &p0);
  CHECK(rho1.probs[0] == rat(1));

  const Graph empty2 = make(2, {});
  const auto uni = exact_distribution(MechanismSpec::uniform_permutation(), empty2, nullptr);
  CHECK(uni.probs[0] == rat(1, 2));
  CHECK(uni.probs[1] == rat(1, 2));

  // single path hand count over all 3! orders
  const Graph chain = make(3, {{1, 0}});
  const auto d = exact_distribution(MechanismSpec::uniform_permutation(), chain, nullptr);
  CHECK(d.probs[0] == rat(1, 2));
  CHECK(d.probs[1] == rat(1, 3));
  CHECK(d.probs[2] == rat(1, 6));

  // star: selected whenever not first
  const Graph star = make(4, {{1, 0}, {2, 0}, {3, 0}});
  CHECK(exact_distribution(MechanismSpec::uniform_permutation(), star, nullptr).probs[0] ==
        rat(3, 4));

  const Graph single = make(1, {});
  const Prediction ps{{0}};
  for (const auto& spec :
       {MechanismSpec::rho_permutation(rat(1, 2)), MechanismSpec::uniform_permutation(),
        MechanismSpec::trivial_predicted(), MechanismSpec::rho_partition(1, rat(1, 2)),
        MechanismSpec::k_partition_baseline(1)})
    CHECK(exact_distribution(spec, single, &ps).probs[0] == rat(1));
}

TEST_CASE("uniform permutation oracle equals direct enumeration") {
  Rng rng(67);
  for (int trial = 0; trial < 25; ++trial) {
    const int n = 2 + static_cast<int>(rng.next_below(4));
    const Graph g = gen_random(n, 0.2 + 0.6 * rng.next_double(), rng.next_u64());
    CHECK(exact_distribution(MechanismSpec::uniform_permutation(), g, nullptr) ==
          brute_uniform(g));
  }
}

TEST_CASE("probability mass contracts") {
  Rng rng(71);
  for (int trial = 0; trial < 15; ++trial) {
    const Graph g = gen_random(5, 0.4, rng.next_u64());
    const Prediction p1{{1}};
    const Prediction p2{{0, 3}};
    CHECK(exact_distribution(MechanismSpec::rho_permutation(rat(2, 3)), g, &p1).mass() == rat(1));
    CHECK(exact_distribution(MechanismSpec::uniform_permutation(), g, nullptr).mass() == rat(1));
    CHECK(exact_distribution(MechanismSpec::rho_partition(2, rat(1, 2)), g, &p2).mass() ==
          rat(2));
    CHECK(exact_distribution(MechanismSpec::k_partition_baseline(2), g, nullptr).mass() <=
          rat(2));
    const auto bi = exact_distribution(MechanismSpec::randomized_bidirectional(), g, nullptr);
    CHECK(bi.mass() <= rat(2));
    CHECK(bi.mass() >= rat(1));
  }
}

TEST_CASE("expected_indegree") {
  const Graph empty = make(3, {});
  CHECK(expected_indegree(exact_distribution(MechanismSpec::uniform_permutation(), empty, nullptr),
                          empty) == rat(0));
  const Graph g10 = make(2, {{1, 0}});
  ExactDistribution d;
  d.probs = {rat(2, 3), rat(1, 3)};
  CHECK(expected_indegree(d, g10) == rat(2, 3));
}

TEST_CASE("partition oracle frozen values") {
  const Graph spoon = make(3, {{2, 0}, {2, 1}});
  const Prediction p{{0, 1}};

  const auto certain = exact_distribution(MechanismSpec::rho_partition(2, rat(1)), spoon, &p);
  CHECK(certain.probs == std::vector<Rational>{rat(1), rat(1), rat(0)});

  const auto half = exact_distribution(MechanismSpec::rho_partition(2, rat(1, 2)), spoon, &p);
  CHECK(half.probs == std::vector<Rational>{rat(3, 4), rat(3, 4), rat(1, 2)});
  CHECK(expected_indegree(half, spoon) == rat(3, 2));  // alpha = 3/4 of delta_2 = 2, tight

  // n == k returns the predicted set with certainty
  const Graph g3 = make(3, {{0, 1}});
  const Prediction full{{0, 1, 2}};
  const auto all = exact_distribution(MechanismSpec::rho_partition(3, rat(1, 2)), g3, &full);
  CHECK(all.probs == std::vector<Rational>{rat(1), rat(1), rat(1)});
}

TEST_CASE("baseline oracle on two vertices") {
  const Graph pair = make(2, {});
  const auto dist = exact_distribution(MechanismSpec::k_partition_baseline(2), pair, nullptr);
  CHECK(dist.probs == std::vector<Rational>{rat(3, 4), rat(3, 4)});
  CHECK(dist.mass() == rat(3, 2));  // expected output size 3/2
}

TEST_CASE("partition oracle degenerate k equals the permutation oracles") {
  Rng rng(73);
  for (int trial = 0; trial < 10; ++trial) {
    const Graph g = gen_random(5, 0.5, rng.next_u64());
    CHECK(exact_distribution(MechanismSpec::k_partition_baseline(1), g, nullptr) ==
          exact_distribution(MechanismSpec::uniform_permutation(), g, nullptr));
    const Prediction p{{2}};
    CHECK(exact_distribution(MechanismSpec::rho_partition(1, rat(2, 3)), g, &p) ==
          exact_distribution(MechanismSpec::rho_permutation(rat(2, 3)), g, &p));
  }
}

TEST_CASE("deterministic kinds give indicator distributions") {
  const auto fig5 = gen_figure_family(InstanceFamily::Fig5TwoSel);
  const auto bi =
      exact_distribution(MechanismSpec::fixed_bidirectional(), fig5[0].graph, &fig5[0].prediction);
  CHECK(bi.probs == std::vector<Rational>{rat(1), rat(1), rat(0)});

  const auto fig6 = gen_figure_family(InstanceFamily::Fig6ThreeSel);
  const auto det =
      exact_distribution(MechanismSpec::det_k(3), fig6[0].graph, &fig6[0].prediction);
  CHECK(expected_indegree(det, fig6[0].graph) == rat(3));

  const auto bi5 =
      exact_distribution(MechanismSpec::randomized_bidirectional(), fig5[4].graph, nullptr);
  CHECK(expected_indegree(bi5, fig5[4].graph) >= rat(2));  // half of delta_2 = 4
}

TEST_CASE("lottery oracle is the weighted combination") {
  const auto fig4 = gen_figure_family(InstanceFamily::Fig4Plurality);
  const Graph& g = fig4[0].graph;
  const Prediction& p = fig4[0].prediction;
  const MechanismSpec a = MechanismSpec::rho_permutation(rat(1));
  const MechanismSpec b = MechanismSpec::uniform_permutation();
  const Rational w = rat(2, 3);
  const auto mixed = exact_distribution(MechanismSpec::lottery(w, a, b), g, &p);
  const auto da = exact_distribution(a, g, &p);
  const auto db = exact_distribution(b, g, &p);
  for (int v = 0; v < g.n; ++v) CHECK(mixed.probs[v] == w * da.probs[v] + (1 - w) * db.probs[v]);

  // weight endpoints collapse to the sub-specs exactly
  CHECK(exact_distribution(MechanismSpec::lottery(rat(1), a, b), g, &p) == da);
  CHECK(exact_distribution(MechanismSpec::lottery(rat(0), a, b), g, &p) == db);
}

TEST_CASE("monte carlo agrees with the oracle within 4 sigma") {
  const Graph g = gen_random(5, 0.5, 31337);
  const Prediction p1{{1}};
  const Prediction p2{{0, 2}};
  const Prediction p3{{0, 2, 4}};
  const long long trials = 20000;
  const std::vector<std::pair<MechanismSpec, const Prediction*>> cases = {
      {MechanismSpec::rho_permutation(rat(2, 3)), &p1},
      {MechanismSpec::uniform_permutation(), nullptr},
      {MechanismSpec::fixed_bidirectional(), &p2},
      {MechanismSpec::randomized_bidirectional(), nullptr},
      {MechanismSpec::det_k(3), &p3},
      {MechanismSpec::rho_partition(2, rat(1, 2)), &p2},
      {MechanismSpec::k_partition_baseline(2), nullptr},
      {MechanismSpec::trivial_predicted(), &p2},
      {MechanismSpec::lottery(rat(1, 3), MechanismSpec::rho_permutation(rat(1)),
                              MechanismSpec::uniform_permutation()),
       &p1},
  };
  int case_idx = 0;
  for (const auto& [spec, pred] : cases) {
    const auto dist = exact_distribution(spec, g, pred);
    std::vector<long long> counts(g.n, 0);
    for (long long t = 0; t < trials; ++t) {
      Rng rng(5000 + case_idx, static_cast<std::uint64_t>(t));
      for (int v : execute_draw(spec, g, pred, rng)) ++counts[v];
    }
    for (int v = 0; v < g.n; ++v) {
      const double prob = rat_double(dist.probs[v]);
      const double freq = counts[v] / static_cast<double>(trials);
      const double sigma = std::sqrt(std::max(prob * (1 - prob), 1e-9) / trials);
      CHECK(std::abs(freq - prob) <= 4.0 * sigma + 1e-12);
    }
    ++case_idx;
  }
}

TEST_CASE("impartiality audit accepts the real scan and rejects the mutant") {
  // full sweep on n = 3: every graph, every vertex, every out-edge subset
  const std::vector<std::pair<int, int>> all_pairs = {{0, 1}, {0, 2}, {1, 0},
                                                      {1, 2}, {2, 0}, {2, 1}};
  const Prediction p{{0}};
  for (int mask = 0; mask < 64; ++mask) {
    std::vector<std::pair<int, int>> edges;
    for (int b = 0; b < 6; ++b)
      if (mask & (1 << b)) edges.push_back(all_pairs[b]);
    const Graph g = make(3, edges);
    for (int v = 0; v < 3; ++v) {
      CHECK(impartiality_audit(MechanismSpec::uniform_permutation(), g, nullptr, v));
      CHECK(impartiality_audit(MechanismSpec::rho_permutation(rat(2, 3)), g, &p, v));
    }
  }

  // trivial rule ignores edges entirely
  const Graph any = make(4, {{1, 2}, {3, 0}});
  CHECK(impartiality_audit(MechanismSpec::trivial_predicted(), any, &p, 3));

  // the mutant's own-edge dependence is visible on a 3-vertex witness
  const Graph base = make(3, {{1, 0}});
  const Graph tampered = with_out_edges(base, 0, {1, 2});
  CHECK(mutant_prob(base, 0) == rat(1, 2));
  CHECK(mutant_prob(tampered, 0) == rat(1, 3));
  bool mutant_impartial_everywhere = true;
  for (int mask = 0; mask < 64 && mutant_impartial_everywhere; ++mask) {
    std::vector<std::pair<int, int>> edges;
    for (int b = 0; b < 6; ++b)
      if (mask & (1 << b)) edges.push_back(all_pairs[b]);
    const Graph g = make(3, edges);
    for (int vertex = 0; vertex < 3 && mutant_impartial_everywhere; ++vertex) {
      const Rational reference = mutant_prob(with_out_edges(g, vertex, {}), vertex);
      for (int sub = 1; sub < 4; ++sub) {
        std::vector<int> targets;
        for (int b = 0; b < 2; ++b)
          if (sub & (1 << b)) targets.push_back((vertex + 1 + b) % 3);
        if (mutant_prob(with_out_edges(g, vertex, targets), vertex) != reference) {
          mutant_impartial_everywhere = false;
          break;
        }
      }
    }
  }
  CHECK_FALSE(mutant_impartial_everywhere);
}

TEST_CASE("plurality-mode impartiality audit") {
  const auto fig4 = gen_figure_family(InstanceFamily::Fig4Plurality);
  for (const auto& inst : fig4)
    for (int v = 0; v < inst.graph.n; ++v)
      CHECK(impartiality_audit(MechanismSpec::rho_permutation(rat(1)), inst.graph,
                               &inst.prediction, v, /*plurality_mode=*/true));
}

TEST_CASE("symmetrize") {
  // full symmetry on the empty graph: uniform inside and outside the prediction
  const Graph empty = make(4, {});
  const Prediction p{{0, 1}};
  const auto sym =
      symmetrize(MechanismSpec::rho_partition(2, rat(1, 2)), empty, p);
  CHECK(sym.probs[0] == sym.probs[1]);
  CHECK(sym.probs[2] == sym.probs[3]);
  CHECK(sym.mass() == rat(2));

  // the uniform rule is already symmetric, so symmetrizing is a no-op
  Rng rng(79);
  for (int trial = 0; trial < 5; ++trial) {
    const Graph g = gen_random(4, 0.5, rng.next_u64());
    const Prediction q{{1}};
    const auto direct = exact_distribution(MechanismSpec::uniform_permutation(), g, &q);
    CHECK(symmetrize(MechanismSpec::uniform_permutation(), g, q) == direct);
  }

  // averaging preserves the expected indegree on the two-vertex instances
  for (const auto& inst : gen_figure_family(InstanceFamily::Fig3OneSel)) {
    const auto spec = MechanismSpec::rho_permutation(rat(2, 3));
    const auto direct = exact_distribution(spec, inst.graph, &inst.prediction);
    const auto s = symmetrize(spec, inst.graph, inst.prediction);
    CHECK(expected_indegree(s, inst.graph) == expected_indegree(direct, inst.graph));
  }
}

TEST_CASE("budget guard refuses oversized enumerations") {
  const Graph g = gen_random(8, 0.5, 55);
  CHECK_THROWS_AS(
      exact_distribution(MechanismSpec::uniform_permutation(), g, nullptr, /*node_budget=*/1000),
      budget_error);
  CHECK(enumeration_cost(MechanismSpec::uniform_permutation(), 8) == 40320);
  // hand count for n=4, k=2: four assignments of the two free vertices cost
  // 7 + 4 + 4 + 7 scan evaluations
  CHECK(enumeration_cost(MechanismSpec::rho_partition(2, rat(1, 2)), 4) == 22);
}

TEST_CASE("correlation audit") {
  const auto fig4 = gen_figure_family(InstanceFamily::Fig4Plurality);
  for (const auto& inst : fig4) {
    const Graph& g = inst.graph;
    const int predicted = 0;
    for (int i = 1; i < g.n; ++i) {
      const int bound = indegree(g, i) - (g.has_edge(predicted, i) ? 1 : 0);
      for (int r = 1; r <= bound; ++r)
        for (int s = 0; s < r; ++s) CHECK(correlation_audit(g, predicted, i, r, s));
    }
  }
  const Graph cycle = make(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}});
  CHECK(correlation_audit(cycle, 0, 2, 1, 0));  // B_1 reachable, still holds
  CHECK_THROWS_AS(correlation_audit(cycle, 0, 0, 1, 0), input_error);
  CHECK_THROWS_AS(correlation_audit(cycle, 0, 2, 2, 0), input_error);
  const Graph sparse = make(3, {{0, 1}});
  CHECK_THROWS_AS(correlation_audit(sparse, 0, 1, 1, 0), input_error);  // not plurality
}

namespace {

// every graph on n vertices, as edge subsets in a fixed pair order
std::vector<Graph> every_graph(int n) {
  std::vector<std::pair<int, int>> pairs;
  for (int u = 0; u < n; ++u)
    for (int v = 0; v < n; ++v)
      if (u != v) pairs.emplace_back(u, v);
  std::vector<Graph> out;
  for (unsigned mask = 0; mask < (1u << pairs.size()); ++mask) {
    std::vector<std::pair<int, int>> edges;
    for (std::size_t b = 0; b < pairs.size(); ++b)
      if (mask & (1u << b)) edges.push_back(pairs[b]);
    out.push_back(Graph::from_edges(n, std::move(edges)));
  }
  return out;
}

}  // namespace

TEST_CASE("rho-permutation bounds hold exactly on every graph with n <= 3") {
  for (int n = 1; n <= 3; ++n) {
    for (const Graph& g : every_graph(n)) {
      const long long delta = max_k_indegree(g, 1).delta;
      for (const Rational& rho : {rat(1, 2), rat(2, 3), rat(1)}) {
        for (int v = 0; v < n; ++v) {
          const Prediction p{{v}};
          const Rational expected =
              expected_indegree(exact_distribution(MechanismSpec::rho_permutation(rho), g, &p), g);
          CHECK(expected >= (1 - rho) * rat(delta));
          if (indegree(g, v) == delta) CHECK(expected >= rho * rat(delta));
        }
      }
    }
  }
}

TEST_CASE("bidirectional bounds hold exactly on every graph with n <= 3") {
  for (int n = 2; n <= 3; ++n) {
    for (const Graph& g : every_graph(n)) {
      const long long delta2 = max_k_indegree(g, 2).delta;
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
          if (a == b) continue;
          const long long selected = set_indegree(g, fixed_bidirectional(g, {a, b}));
          CHECK(2 * selected >= delta2);
          if (indegree(g, a) + indegree(g, b) == delta2) CHECK(selected >= delta2);
        }
    }
  }
}

TEST_CASE("plurality mixture formulas are honored by the exact oracle") {
  // lottery of the 1-permutation rule (weight rho) with the uniform rule,
  // checked against the delta-parameterized guarantee formulas on every
  // plurality graph with up to 4 vertices
  std::vector<Graph> graphs;
  for (int n = 2; n <= 4; ++n) {
    std::vector<int> targets(n, 0);
    while (true) {
      std::vector<std::pair<int, int>> edges;
      for (int u = 0; u < n; ++u) {
        int t = targets[u] >= u ? targets[u] + 1 : targets[u];
        edges.emplace_back(u, t);
      }
      graphs.push_back(Graph::from_edges(n, std::move(edges)));
      int pos = n - 1;
      while (pos >= 0 && targets[pos] == n - 2) targets[pos--] = 0;
      if (pos < 0) break;
      ++targets[pos];
    }
  }
  for (const Rational& rho : {rat(0), rat(1, 2), rat(1)}) {
    const MechanismSpec mix = MechanismSpec::lottery(rho, MechanismSpec::rho_permutation(rat(1)),
                                                     MechanismSpec::uniform_permutation());
    for (const Graph& g : graphs) {
      const long long delta = max_k_indegree(g, 1).delta;
      if (delta < 2) continue;  // every vertex has indegree 1, any selection is optimal
      GuaranteeParams params;
      params.rho = rho;
      params.delta = delta;
      const GuaranteePair pair = guarantee_pair(GuaranteeKind::PluralityMixture, params);
      for (int v = 0; v < g.n; ++v) {
        const Prediction p{{v}};
        const Rational expected = expected_indegree(exact_distribution(mix, g, &p), g);
        CHECK(expected >= pair.beta * rat(delta));
        if (indegree(g, v) == delta) CHECK(expected >= pair.alpha * rat(delta));
      }
    }
  }
}

TEST_CASE("bound audit on the one-selection family") {
  const auto report = bound_audit(BoundSetting::Sel1, MechanismSpec::rho_permutation(rat(2, 3)));
  CHECK(report.pass);
  CHECK(report.linkage_ok);
  CHECK(report.p_values[0] == rat(2, 3));
  CHECK(report.p_values[1] == rat(1, 3));
  CHECK(report.alpha_hat == rat(2, 3));
  CHECK(report.beta_hat == rat(1, 3));
  CHECK(report.alpha_hat + report.beta_hat == rat(1));  // boundary of the feasible region

  const auto trivial = bound_audit(BoundSetting::Sel1, MechanismSpec::trivial_predicted());
  CHECK(trivial.pass);
  CHECK(trivial.p_values[0] == rat(1));
  CHECK(trivial.p_values[1] == rat(0));
  CHECK(trivial.alpha_hat == rat(1));
  CHECK(trivial.beta_hat == rat(0));
}

TEST_CASE("bound audit across settings and mechanisms") {
  CHECK(bound_audit(BoundSetting::Sel1Plurality, MechanismSpec::rho_permutation(rat(1))).pass);
  CHECK(bound_audit(BoundSetting::Sel2, MechanismSpec::fixed_bidirectional()).pass);
  CHECK(bound_audit(BoundSetting::Sel2, MechanismSpec::randomized_bidirectional()).pass);
  const auto sel3 = bound_audit(BoundSetting::Sel3, MechanismSpec::rho_partition(3, rat(1, 2)));
  CHECK(sel3.pass);
  for (const auto& c : sel3.constraints) CHECK(c.pass);
  CHECK(bound_audit(BoundSetting::Sel3, MechanismSpec::det_k(3)).pass);

  const auto json = bound_report_to_json(sel3);
  CHECK(json.at("pass").get<bool>());
  CHECK(json.at("constraints").size() == sel3.constraints.size());
}
