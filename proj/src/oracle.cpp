#include "impsel/oracle.hpp"

#include <algorithm>
#include <cmath>

#include "impsel/errors.hpp"

namespace impsel {

Rational ExactDistribution::mass() const {
  Rational total = 0;
  for (const auto& q : probs) total += q;
  return total;
}

namespace {

double factorial_d(int m) {
  double f = 1.0;
  for (int i = 2; i <= m; ++i) f *= i;
  return f;
}

// Candidate-scan evaluations needed per kind (exact counts, computed in
// doubles; anything near the budget is far below double precision loss).
// resolved_k substitutes for a missing spec.k on the partition kinds.
double cost_estimate(const MechanismSpec& spec, int n, int resolved_k) {
  switch (spec.kind) {
    case MechanismKind::UniformPermutation: return factorial_d(n);
    case MechanismKind::RhoPermutation: return factorial_d(n - 1) * n;
    case MechanismKind::FixedBidirectional:
    case MechanismKind::TrivialPredicted:
    case MechanismKind::DetK: return 2.0;
    case MechanismKind::RandomizedBidirectional: return factorial_d(n) * 2.0;
    case MechanismKind::RhoPartition: {
      const int k = spec.k.value_or(resolved_k);
      const int free_count = n - k;
      double total = 0.0;
      for (int m = 0; m <= free_count; ++m) {
        double combos = 1.0;  // C(free_count, m) (k-1)^(free_count-m)
        for (int i = 0; i < m; ++i) combos = combos * (free_count - i) / (i + 1);
        combos *= std::pow(static_cast<double>(k - 1), free_count - m);
        total += combos * factorial_d(m) * (m + 1);
      }
      return total * k;
    }
    case MechanismKind::KPartitionBaseline: {
      const int k = *spec.k;
      double total = 0.0;
      for (int m = 0; m <= n; ++m) {
        double combos = 1.0;
        for (int i = 0; i < m; ++i) combos = combos * (n - i) / (i + 1);
        combos *= std::pow(static_cast<double>(k - 1), n - m);
        total += combos * factorial_d(m);
      }
      return total * k;
    }
    case MechanismKind::Lottery:
      return cost_estimate(*spec.a, n, resolved_k) + cost_estimate(*spec.b, n, resolved_k);
  }
  throw input_error("unknown mechanism kind");
}

void check_budget(const MechanismSpec& spec, int n, int resolved_k, long long node_budget,
                  double multiplier) {
  const double cost = cost_estimate(spec, n, resolved_k) * multiplier;
  if (cost > static_cast<double>(node_budget))
    throw budget_error("enumeration needs ~" + std::to_string(static_cast<long long>(cost)) +
                       " scan evaluations, over the budget of " + std::to_string(node_budget));
}

// Cut weights for a set holding one fixed-priority vertex and m uniformly
// drawn vertices: placing exactly the first c of an arrangement before the
// fixed vertex has probability rho^c (1-rho)^(m-c) / (c! (m-c)!).
std::vector<Rational> cut_weights(int m, const Rational& rho) {
  std::vector<Rational> w(m + 1);
  for (int c = 0; c <= m; ++c)
    w[c] = rat_pow(rho, c) * rat_pow(1 - rho, m - c) /
           (Rational(big_factorial(c)) * Rational(big_factorial(m - c)));
  return w;
}

// Selection distribution of the candidate scan on eligible set
// {fixed} + others, with the fixed vertex at priority rho. Adds into probs
// scaled by an outer weight.
void accumulate_rho_set(const Graph& g, int fixed, std::vector<int> others, const Rational& rho,
                        const Rational& outer_weight, std::vector<Rational>& probs) {
  const int m = static_cast<int>(others.size());
  if (m == 0) {
    probs[fixed] += outer_weight;
    return;
  }
  std::sort(others.begin(), others.end());
  const std::vector<Rational> weights = cut_weights(m, rho);
  std::vector<std::vector<long long>> counts(m + 1, std::vector<long long>(g.n, 0));
  std::vector<int> perm(m + 1);
  std::vector<int> arrangement = others;
  do {
    for (int c = 0; c <= m; ++c) {
      if (weights[c] == 0) continue;
      perm.clear();
      perm.insert(perm.end(), arrangement.begin(), arrangement.begin() + c);
      perm.push_back(fixed);
      perm.insert(perm.end(), arrangement.begin() + c, arrangement.end());
      ++counts[c][permutation_select_perm(g, perm)];
    }
  } while (std::next_permutation(arrangement.begin(), arrangement.end()));
  for (int c = 0; c <= m; ++c) {
    if (weights[c] == 0) continue;
    for (int v = 0; v < g.n; ++v)
      if (counts[c][v] != 0)
        probs[v] += outer_weight * weights[c] * rat(static_cast<long>(counts[c][v]));
  }
}

// Selection distribution of the candidate scan on a set with all-uniform
// priorities (every arrangement equally likely).
void accumulate_uniform_set(const Graph& g, std::vector<int> members, const Rational& outer_weight,
                            std::vector<Rational>& probs) {
  const int m = static_cast<int>(members.size());
  if (m == 0) return;
  std::sort(members.begin(), members.end());
  std::vector<long long> counts(g.n, 0);
  std::vector<int> arrangement = members;
  do {
    ++counts[permutation_select_perm(g, arrangement)];
  } while (std::next_permutation(arrangement.begin(), arrangement.end()));
  const Rational per = outer_weight / Rational(big_factorial(m));
  for (int v = 0; v < g.n; ++v)
    if (counts[v] != 0) probs[v] += per * rat(static_cast<long>(counts[v]));
}

void accumulate_bidirectional(const Graph& g, const Rational& outer_weight,
                              std::vector<Rational>& probs) {
  std::vector<int> arrangement(g.n);
  for (int i = 0; i < g.n; ++i) arrangement[i] = i;
  std::vector<long long> counts(g.n, 0);
  long long total = 0;
  std::vector<int> reversed(g.n);
  do {
    std::reverse_copy(arrangement.begin(), arrangement.end(), reversed.begin());
    const int first = permutation_select_perm(g, arrangement);
    const int second = permutation_select_perm(g, reversed);
    ++counts[first];
    if (second != first) ++counts[second];
    ++total;
  } while (std::next_permutation(arrangement.begin(), arrangement.end()));
  for (int v = 0; v < g.n; ++v)
    if (counts[v] != 0) probs[v] += outer_weight * rat(counts[v]) / rat(total);
}

// Enumerates every assignment of `free_vertices` to k sets; fn receives the
// per-set member lists (already holding any pinned vertices).
template <typename Fn>
void for_each_assignment(const std::vector<int>& free_vertices, int k,
                         std::vector<std::vector<int>> base_sets, Fn&& fn) {
  const int f = static_cast<int>(free_vertices.size());
  std::vector<int> choice(f, 0);
  while (true) {
    auto sets = base_sets;
    for (int i = 0; i < f; ++i) sets[choice[i]].push_back(free_vertices[i]);
    fn(sets);
    int pos = f - 1;
    while (pos >= 0 && choice[pos] == k - 1) {
      choice[pos] = 0;
      --pos;
    }
    if (pos < 0) break;
    ++choice[pos];
  }
}

ExactDistribution exact_distribution_impl(const MechanismSpec& spec, const Graph& g,
                                          const Prediction* p) {
  ExactDistribution dist;
  dist.probs.assign(g.n, 0);
  switch (spec.kind) {
    case MechanismKind::RhoPermutation: {
      std::vector<int> others;
      for (int i = 0; i < g.n; ++i)
        if (i != p->vertices[0]) others.push_back(i);
      accumulate_rho_set(g, p->vertices[0], std::move(others), *spec.rho, rat(1), dist.probs);
      return dist;
    }
    case MechanismKind::UniformPermutation: {
      std::vector<int> all(g.n);
      for (int i = 0; i < g.n; ++i) all[i] = i;
      accumulate_uniform_set(g, std::move(all), rat(1), dist.probs);
      return dist;
    }
    case MechanismKind::FixedBidirectional: {
      for (int v : fixed_bidirectional(g, {p->vertices[0], p->vertices[1]})) dist.probs[v] = 1;
      return dist;
    }
    case MechanismKind::RandomizedBidirectional: {
      accumulate_bidirectional(g, rat(1), dist.probs);
      return dist;
    }
    case MechanismKind::DetK: {
      for (int v : det_k_selection(g, *p)) dist.probs[v] = 1;
      return dist;
    }
    case MechanismKind::TrivialPredicted: {
      for (int v : p->vertices) dist.probs[v] = 1;
      return dist;
    }
    case MechanismKind::RhoPartition: {
      const int k = p->k();
      std::vector<char> predicted(g.n, 0);
      for (int v : p->vertices) predicted[v] = 1;
      std::vector<int> free_vertices;
      for (int i = 0; i < g.n; ++i)
        if (!predicted[i]) free_vertices.push_back(i);
      const Rational assignment_weight =
          rat_pow(rat(1, k), static_cast<unsigned long>(free_vertices.size()));
      std::vector<std::vector<int>> base_sets(k);
      for_each_assignment(free_vertices, k, base_sets, [&](const auto& sets) {
        for (int j = 0; j < k; ++j)
          accumulate_rho_set(g, p->vertices[j], sets[j], *spec.rho, assignment_weight,
                             dist.probs);
      });
      return dist;
    }
    case MechanismKind::KPartitionBaseline: {
      const int k = *spec.k;
      std::vector<int> all(g.n);
      for (int i = 0; i < g.n; ++i) all[i] = i;
      const Rational assignment_weight = rat_pow(rat(1, k), static_cast<unsigned long>(g.n));
      std::vector<std::vector<int>> base_sets(k);
      for_each_assignment(all, k, base_sets, [&](const auto& sets) {
        for (int j = 0; j < k; ++j)
          accumulate_uniform_set(g, sets[j], assignment_weight, dist.probs);
      });
      return dist;
    }
    case MechanismKind::Lottery: {
      ExactDistribution da = exact_distribution_impl(*spec.a, g, p);
      ExactDistribution db = exact_distribution_impl(*spec.b, g, p);
      const Rational w = *spec.mix_weight;
      for (int v = 0; v < g.n; ++v) dist.probs[v] = w * da.probs[v] + (1 - w) * db.probs[v];
      return dist;
    }
  }
  throw input_error("unknown mechanism kind");
}

}  // namespace

long long enumeration_cost(const MechanismSpec& spec, int n, int resolved_k) {
  return static_cast<long long>(cost_estimate(spec, n, resolved_k));
}

ExactDistribution exact_distribution(const MechanismSpec& spec, const Graph& g,
                                     const Prediction* p, long long node_budget) {
  validate_spec(spec);
  if (spec_needs_prediction(spec)) {
    if (p == nullptr) throw input_error(kind_id(spec.kind) + " needs a prediction");
    validate_prediction(g, *p);
  }
  const int k = mechanism_k(spec, p);
  check_budget(spec, g.n, k, node_budget, 1.0);
  return exact_distribution_impl(spec, g, p);
}

Rational expected_indegree(const ExactDistribution& dist, const Graph& g) {
  if (static_cast<int>(dist.probs.size()) != g.n)
    throw input_error("distribution not defined on this graph");
  Rational total = 0;
  for (int v = 0; v < g.n; ++v)
    if (dist.probs[v] != 0) total += dist.probs[v] * indegree(g, v);
  return total;
}

bool impartiality_audit(const MechanismSpec& spec, const Graph& g, const Prediction* p,
                        int vertex, bool plurality_mode, long long node_budget) {
  if (vertex < 0 || vertex >= g.n)
    throw input_error("vertex id out of range: " + std::to_string(vertex));
  std::vector<std::vector<int>> variants;
  if (plurality_mode) {
    for (int t = 0; t < g.n; ++t)
      if (t != vertex) variants.push_back({t});
  } else {
    std::vector<int> candidates;
    for (int t = 0; t < g.n; ++t)
      if (t != vertex) candidates.push_back(t);
    const int m = static_cast<int>(candidates.size());
    for (int mask = 0; mask < (1 << m); ++mask) {
      std::vector<int> targets;
      for (int b = 0; b < m; ++b)
        if (mask & (1 << b)) targets.push_back(candidates[b]);
      variants.push_back(std::move(targets));
    }
  }
  check_budget(spec, g.n, mechanism_k(spec, p), node_budget,
               static_cast<double>(variants.size()));

  bool first = true;
  Rational reference;
  for (const auto& targets : variants) {
    const Graph variant = with_out_edges(g, vertex, targets);
    const ExactDistribution dist = exact_distribution(spec, variant, p, node_budget);
    if (first) {
      reference = dist.probs[vertex];
      first = false;
    } else if (dist.probs[vertex] != reference) {
      return false;
    }
  }
  return true;
}

std::vector<std::vector<int>> s_invariant_permutations(int n, const std::vector<int>& predicted) {
  std::vector<char> is_pred(n, 0);
  for (int v : predicted) is_pred[v] = 1;
  std::vector<int> pred_sorted = predicted;
  std::sort(pred_sorted.begin(), pred_sorted.end());
  std::vector<int> rest;
  for (int v = 0; v < n; ++v)
    if (!is_pred[v]) rest.push_back(v);

  std::vector<std::vector<int>> result;
  std::vector<int> pred_perm = pred_sorted;
  do {
    std::vector<int> rest_perm = rest;
    do {
      std::vector<int> full(n);
      for (std::size_t i = 0; i < pred_sorted.size(); ++i) full[pred_sorted[i]] = pred_perm[i];
      for (std::size_t i = 0; i < rest.size(); ++i) full[rest[i]] = rest_perm[i];
      result.push_back(std::move(full));
    } while (std::next_permutation(rest_perm.begin(), rest_perm.end()));
  } while (std::next_permutation(pred_perm.begin(), pred_perm.end()));
  return result;
}

Graph relabel_graph(const Graph& g, const std::vector<int>& perm) {
  std::vector<std::pair<int, int>> edges;
  edges.reserve(g.edges.size());
  for (auto [u, v] : g.edges) edges.emplace_back(perm[u], perm[v]);
  return Graph::from_edges(g.n, std::move(edges));
}

ExactDistribution symmetrize(const MechanismSpec& spec, const Graph& g, const Prediction& p,
                             long long node_budget) {
  validate_prediction(g, p);
  const auto perms = s_invariant_permutations(g.n, p.vertices);
  check_budget(spec, g.n, mechanism_k(spec, &p), node_budget, static_cast<double>(perms.size()));
  ExactDistribution acc;
  acc.probs.assign(g.n, 0);
  for (const auto& perm : perms) {
    const Graph relabeled = relabel_graph(g, perm);
    const ExactDistribution dist = exact_distribution(spec, relabeled, &p, node_budget);
    for (int v = 0; v < g.n; ++v) acc.probs[v] += dist.probs[perm[v]];
  }
  const Rational scale = rat(1, static_cast<long>(perms.size()));
  for (auto& q : acc.probs) q *= scale;
  return acc;
}

bool correlation_audit(const Graph& g, int predicted, int i, int r, int s) {
  if (!is_plurality(g)) throw input_error("correlation audit needs a plurality graph");
  if (predicted < 0 || predicted >= g.n || i < 0 || i >= g.n)
    throw input_error("vertex id out of range");
  if (i == predicted) throw input_error("audited vertex must differ from the predicted vertex");
  const int bound = indegree(g, i) - (g.has_edge(predicted, i) ? 1 : 0);
  if (!(0 <= s && s < r && r <= bound))
    throw input_error("need 0 <= s < r <= indegree(i) minus the predicted-edge indicator");

  std::vector<int> others;
  for (int v = 0; v < g.n; ++v)
    if (v != predicted) others.push_back(v);

  long long count_as = 0, count_ar = 0, count_br_as = 0, count_br_ar = 0;
  std::vector<int> pos(g.n, 0);
  std::vector<int> arrangement = others;
  do {
    for (std::size_t idx = 0; idx < arrangement.size(); ++idx) pos[arrangement[idx]] = idx;
    pos[predicted] = g.n - 1;  // fixed last
    int left_i = 0;
    bool b_r = false;
    for (int v = 0; v < g.n; ++v) {
      int left = 0;
      for (int w : g.in_adj[v])
        if (pos[w] < pos[v]) ++left;
      if (v == i)
        left_i = left;
      else if (left >= r)
        b_r = true;
    }
    if (left_i == s) {
      ++count_as;
      if (b_r) ++count_br_as;
    } else if (left_i == r) {
      ++count_ar;
      if (b_r) ++count_br_ar;
    }
  } while (std::next_permutation(arrangement.begin(), arrangement.end()));

  // P[B_r | A_s] >= P[B_r | A_r], cross-multiplied to stay in integers.
  return count_br_as * count_ar >= count_br_ar * count_as;
}

namespace {

struct SettingData {
  InstanceFamily family;
  int p_count;
  // slots[j] lists the (instance index, vertex) positions that share label p_{j+1}
  std::vector<std::vector<std::pair<int, int>>> slots;
  struct Ineq {
    std::string name;
    Rational coef_alpha;
    Rational coef_beta;
    std::vector<std::pair<int, Rational>> coef_p;  // (p index, coefficient)
    Rational rhs;
  };
  std::vector<Ineq> inequalities;
};

const SettingData& setting_data(BoundSetting setting) {
  static const SettingData sel1{
      InstanceFamily::Fig3OneSel,
      2,
      {
          {{0, 0}, {2, 0}},  // p1
          {{1, 1}, {2, 1}},  // p2
      },
      {
          {"alpha <= p1", rat(1), rat(0), {{0, rat(-1)}}, rat(0)},
          {"beta <= p1", rat(0), rat(1), {{0, rat(-1)}}, rat(0)},
          {"beta <= p2", rat(0), rat(1), {{1, rat(-1)}}, rat(0)},
          {"p1 + p2 <= 1", rat(0), rat(0), {{0, rat(1)}, {1, rat(1)}}, rat(1)},
      }};
  static const SettingData sel1p{
      InstanceFamily::Fig4Plurality,
      6,
      {
          {{0, 0}, {1, 0}},  // p1
          {{0, 1}, {2, 1}},  // p2
          {{1, 1}},          // p3
          {{1, 2}},          // p4
          {{2, 0}},          // p5
          {{2, 2}},          // p6
      },
      {
          {"p1 + p2 <= 1", rat(0), rat(0), {{0, rat(1)}, {1, rat(1)}}, rat(1)},
          {"p1 + p3 + p4 <= 1", rat(0), rat(0), {{0, rat(1)}, {2, rat(1)}, {3, rat(1)}}, rat(1)},
          {"2 alpha <= 2 p1 + p3 + p4",
           rat(2), rat(0), {{0, rat(-2)}, {2, rat(-1)}, {3, rat(-1)}}, rat(0)},
          {"2 beta <= 2 p1 + p3 + p4",
           rat(0), rat(2), {{0, rat(-2)}, {2, rat(-1)}, {3, rat(-1)}}, rat(0)},
          {"p2 + p5 + p6 <= 1", rat(0), rat(0), {{1, rat(1)}, {4, rat(1)}, {5, rat(1)}}, rat(1)},
          {"2 beta <= 2 p2 + p5 + p6",
           rat(0), rat(2), {{1, rat(-2)}, {4, rat(-1)}, {5, rat(-1)}}, rat(0)},
      }};
  static const SettingData sel2{
      InstanceFamily::Fig5TwoSel,
      5,
      {
          {{0, 0}, {0, 1}, {3, 0}},  // p1
          {{1, 1}, {2, 0}, {2, 1}},  // p2
          {{1, 2}, {3, 2}},          // p3
          {{2, 2}, {4, 2}},          // p4
          {{3, 1}, {4, 0}, {4, 1}},  // p5
      },
      {
          {"2 alpha <= 2 p1", rat(2), rat(0), {{0, rat(-2)}}, rat(0)},
          {"2 beta <= 2 p1", rat(0), rat(2), {{0, rat(-2)}}, rat(0)},
          {"2 beta <= p2 + p3", rat(0), rat(2), {{1, rat(-1)}, {2, rat(-1)}}, rat(0)},
          {"2 p2 + p4 <= 2", rat(0), rat(0), {{1, rat(2)}, {3, rat(1)}}, rat(2)},
          {"p1 + p3 + p5 <= 2", rat(0), rat(0), {{0, rat(1)}, {2, rat(1)}, {4, rat(1)}}, rat(2)},
          {"4 alpha <= 2 p4 + 4 p5", rat(4), rat(0), {{3, rat(-2)}, {4, rat(-4)}}, rat(0)},
          {"4 beta <= 2 p4 + 4 p5", rat(0), rat(4), {{3, rat(-2)}, {4, rat(-4)}}, rat(0)},
      }};
  static const SettingData sel3{
      InstanceFamily::Fig6ThreeSel,
      12,
      {
          {{0, 0}, {0, 1}, {0, 2}, {3, 0}},  // p1
          {{1, 0}, {1, 1}, {1, 2}, {5, 0}},  // p2
          {{1, 3}, {4, 3}, {4, 4}},          // p3
          {{2, 1}, {2, 2}, {6, 0}, {6, 1}},  // p4
          {{2, 3}, {2, 4}, {3, 4}, {5, 4}},  // p5
          {{3, 1}, {3, 2}},                  // p6
          {{3, 3}},                          // p7
          {{4, 0}, {4, 1}, {4, 2}},          // p8
          {{5, 1}, {5, 2}},                  // p9
          {{5, 3}},                          // p10
          {{6, 2}},                          // p11
          {{6, 3}, {6, 4}},                  // p12
      },
      {
          {"3 alpha <= 3 p1", rat(3), rat(0), {{0, rat(-3)}}, rat(0)},
          {"3 alpha <= 3 p2 + p3", rat(3), rat(0), {{1, rat(-3)}, {2, rat(-1)}}, rat(0)},
          {"3 beta <= 3 p2 + p3", rat(0), rat(3), {{1, rat(-3)}, {2, rat(-1)}}, rat(0)},
          {"3 beta <= 2 p4 + 2 p5", rat(0), rat(3), {{3, rat(-2)}, {4, rat(-2)}}, rat(0)},
          {"p1 + p5 + 2 p6 + p7 <= 3",
           rat(0), rat(0), {{0, rat(1)}, {4, rat(1)}, {5, rat(2)}, {6, rat(1)}}, rat(3)},
          {"5 alpha <= p1 + p5 + 4 p6 + p7",
           rat(5), rat(0), {{0, rat(-1)}, {4, rat(-1)}, {5, rat(-4)}, {6, rat(-1)}}, rat(0)},
          {"2 p3 + 3 p8 <= 3", rat(0), rat(0), {{2, rat(2)}, {7, rat(3)}}, rat(3)},
          {"6 alpha <= 2 p3 + 6 p8", rat(6), rat(0), {{2, rat(-2)}, {7, rat(-6)}}, rat(0)},
          {"6 beta <= 2 p3 + 6 p8", rat(0), rat(6), {{2, rat(-2)}, {7, rat(-6)}}, rat(0)},
          {"p2 + p5 + 2 p9 + p10 <= 3",
           rat(0), rat(0), {{1, rat(1)}, {4, rat(1)}, {8, rat(2)}, {9, rat(1)}}, rat(3)},
          {"6 beta <= p2 + p5 + 4 p9 + 2 p10",
           rat(0), rat(6), {{1, rat(-1)}, {4, rat(-1)}, {8, rat(-4)}, {9, rat(-2)}}, rat(0)},
          {"2 p4 + p11 + 2 p12 <= 3",
           rat(0), rat(0), {{3, rat(2)}, {10, rat(1)}, {11, rat(2)}}, rat(3)},
          {"6 beta <= 2 p4 + 2 p11 + 4 p12",
           rat(0), rat(6), {{3, rat(-2)}, {10, rat(-2)}, {11, rat(-4)}}, rat(0)},
      }};
  switch (setting) {
    case BoundSetting::Sel1: return sel1;
    case BoundSetting::Sel1Plurality: return sel1p;
    case BoundSetting::Sel2: return sel2;
    case BoundSetting::Sel3: return sel3;
  }
  throw input_error("unknown bound setting");
}

}  // namespace

InstanceFamily setting_family(BoundSetting setting) { return setting_data(setting).family; }

BoundAuditReport bound_audit(BoundSetting setting, const MechanismSpec& spec,
                             long long node_budget) {
  const SettingData& data = setting_data(setting);
  const auto instances = gen_figure_family(data.family);
  const int k = family_k(data.family);

  BoundAuditReport report;
  report.setting = setting;
  report.mechanism = spec.describe();

  std::vector<ExactDistribution> dists;
  dists.reserve(instances.size());
  bool have_accurate = false;
  for (std::size_t t = 0; t < instances.size(); ++t) {
    const auto& inst = instances[t];
    ExactDistribution sym = symmetrize(spec, inst.graph, inst.prediction, node_budget);

    BoundInstanceRow row;
    row.index = static_cast<int>(t);
    row.delta_k = max_k_indegree(inst.graph, k).delta;
    row.predicted_indegree = set_indegree(inst.graph, inst.prediction.vertices);
    row.accurate = row.predicted_indegree == row.delta_k;
    row.expected = expected_indegree(sym, inst.graph);
    row.ratio = row.delta_k > 0 ? row.expected / rat(row.delta_k) : rat(1);

    if (row.accurate && (!have_accurate || row.ratio < report.alpha_hat)) {
      report.alpha_hat = row.ratio;
      have_accurate = true;
    }
    if (t == 0 || row.ratio < report.beta_hat) report.beta_hat = row.ratio;

    report.constraints.push_back({"mass(g" + std::to_string(t + 1) + ") <= k", sym.mass(), rat(k),
                                  sym.mass() <= rat(k)});
    report.instances.push_back(std::move(row));
    dists.push_back(std::move(sym));
  }
  if (!have_accurate) throw input_error("instance family has no accurate-prediction instance");

  // (a) every slot sharing a label must carry the same exact probability
  report.p_values.assign(data.p_count, rat(0));
  report.linkage_ok = true;
  for (int j = 0; j < data.p_count; ++j) {
    const auto& slots = data.slots[j];
    report.p_values[j] = dists[slots[0].first].probs[slots[0].second];
    for (const auto& [t, v] : slots) {
      if (dists[t].probs[v] != report.p_values[j]) {
        report.linkage_ok = false;
        report.linkage_failures.push_back(
            "p" + std::to_string(j + 1) + " differs at instance " + std::to_string(t + 1) +
            " vertex " + std::to_string(v) + ": " + rat_str(dists[t].probs[v]) + " vs " +
            rat_str(report.p_values[j]));
      }
    }
  }

  // (b) the setting's linear inequalities over the labels and measured ratios
  for (const auto& ineq : data.inequalities) {
    Rational lhs = ineq.coef_alpha * report.alpha_hat + ineq.coef_beta * report.beta_hat;
    for (const auto& [j, coef] : ineq.coef_p) lhs += coef * report.p_values[j];
    report.constraints.push_back({ineq.name, lhs, ineq.rhs, lhs <= ineq.rhs});
  }

  // (c) the measured point must lie in the setting's feasible region
  for (const auto& c : upper_bound_region(setting).constraints) {
    const Rational lhs = c.coef_alpha * report.alpha_hat + c.coef_beta * report.beta_hat;
    report.constraints.push_back({"region: " + c.name, lhs, c.rhs, lhs <= c.rhs});
  }

  report.pass = report.linkage_ok;
  for (const auto& c : report.constraints) report.pass = report.pass && c.pass;
  return report;
}

}  // namespace impsel
