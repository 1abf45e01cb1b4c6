#include "impsel/graph.hpp"

#include <algorithm>
#include <set>

#include "impsel/errors.hpp"
#include "impsel/rng.hpp"

namespace impsel {

Graph Graph::from_edges(int n, std::vector<std::pair<int, int>> edge_list) {
  if (n < 1) throw input_error("graph needs at least one vertex");
  std::sort(edge_list.begin(), edge_list.end());
  edge_list.erase(std::unique(edge_list.begin(), edge_list.end()), edge_list.end());
  Graph g;
  g.n = n;
  g.in_adj.assign(n, {});
  g.out_adj.assign(n, {});
  for (auto [u, v] : edge_list) {
    if (u < 0 || u >= n || v < 0 || v >= n)
      throw input_error("edge endpoint out of range: (" + std::to_string(u) + "," +
                        std::to_string(v) + ")");
    if (u == v) throw input_error("self-loop at vertex " + std::to_string(u));
    g.out_adj[u].push_back(v);
    g.in_adj[v].push_back(u);
  }
  g.edges = std::move(edge_list);
  return g;
}

bool Graph::has_edge(int u, int v) const {
  return std::binary_search(edges.begin(), edges.end(), std::make_pair(u, v));
}

bool Prediction::contains(int v) const {
  return std::find(vertices.begin(), vertices.end(), v) != vertices.end();
}

void validate_prediction(const Graph& g, const Prediction& p) {
  if (p.vertices.empty()) throw input_error("prediction must contain at least one vertex");
  if (p.k() > g.n) throw input_error("prediction larger than vertex set");
  std::set<int> seen;
  for (int v : p.vertices) {
    if (v < 0 || v >= g.n) throw input_error("predicted vertex out of range: " + std::to_string(v));
    if (!seen.insert(v).second)
      throw input_error("duplicate predicted vertex: " + std::to_string(v));
  }
}

int indegree(const Graph& g, int i) {
  if (i < 0 || i >= g.n) throw input_error("vertex id out of range: " + std::to_string(i));
  return static_cast<int>(g.in_adj[i].size());
}

int indegree_from(const Graph& g, const std::vector<int>& sources, int i) {
  if (i < 0 || i >= g.n) throw input_error("vertex id out of range: " + std::to_string(i));
  std::vector<char> in_src(g.n, 0);
  for (int s : sources) {
    if (s < 0 || s >= g.n) throw input_error("source id out of range: " + std::to_string(s));
    in_src[s] = 1;
  }
  int count = 0;
  for (int w : g.in_adj[i])
    if (in_src[w]) ++count;
  return count;
}

long long set_indegree(const Graph& g, const std::vector<int>& vs) {
  long long total = 0;
  for (int v : vs) total += indegree(g, v);
  return total;
}

namespace {

// Enumerates k-combinations of [0, n) in lexicographic order; the first
// combination attaining the maximum is the lexicographically smallest witness.
MaxKIndegree max_k_exhaustive(const Graph& g, int k) {
  std::vector<int> pick(k);
  for (int i = 0; i < k; ++i) pick[i] = i;
  MaxKIndegree best;
  best.delta = -1;
  while (true) {
    long long sum = 0;
    for (int v : pick) sum += static_cast<long long>(g.in_adj[v].size());
    if (sum > best.delta) {
      best.delta = sum;
      best.witness = pick;
    }
    int i = k - 1;
    while (i >= 0 && pick[i] == g.n - k + i) --i;
    if (i < 0) break;
    ++pick[i];
    for (int j = i + 1; j < k; ++j) pick[j] = pick[j - 1] + 1;
  }
  return best;
}

MaxKIndegree max_k_greedy(const Graph& g, int k) {
  std::vector<int> order(g.n);
  for (int i = 0; i < g.n; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return g.in_adj[a].size() > g.in_adj[b].size();
  });
  MaxKIndegree best;
  best.witness.assign(order.begin(), order.begin() + k);
  std::sort(best.witness.begin(), best.witness.end());
  for (int v : best.witness) best.delta += static_cast<long long>(g.in_adj[v].size());
  return best;
}

}  // namespace

MaxKIndegree max_k_indegree(const Graph& g, int k) {
  if (k < 1 || k > g.n) throw input_error("k out of range: " + std::to_string(k));
  return g.n <= 20 ? max_k_exhaustive(g, k) : max_k_greedy(g, k);
}

bool is_plurality(const Graph& g) {
  for (int v = 0; v < g.n; ++v)
    if (g.out_degree(v) != 1) return false;
  return true;
}

Rational prediction_error(const Graph& g, const Prediction& p) {
  validate_prediction(g, p);
  const long long delta = max_k_indegree(g, p.k()).delta;
  if (delta == 0) return rat(0);
  const long long pred = set_indegree(g, p.vertices);
  return rat(delta - pred) / rat(delta);
}

Graph gen_random(int n, double edge_prob, std::uint64_t seed) {
  if (n < 1) throw input_error("graph needs at least one vertex");
  if (edge_prob < 0.0 || edge_prob > 1.0) throw input_error("edge probability outside [0,1]");
  Rng rng(seed);
  std::vector<std::pair<int, int>> edges;
  for (int u = 0; u < n; ++u)
    for (int v = 0; v < n; ++v) {
      if (u == v) continue;
      if (rng.next_double() < edge_prob) edges.emplace_back(u, v);
    }
  return Graph::from_edges(n, std::move(edges));
}

Graph gen_random_plurality(int n, std::uint64_t seed) {
  if (n < 2) throw input_error("plurality graph needs at least two vertices");
  Rng rng(seed);
  std::vector<std::pair<int, int>> edges;
  edges.reserve(n);
  for (int u = 0; u < n; ++u) {
    int t = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(n - 1)));
    if (t >= u) ++t;  // skip the self slot
    edges.emplace_back(u, t);
  }
  return Graph::from_edges(n, std::move(edges));
}

Graph with_out_edges(const Graph& g, int i, const std::vector<int>& targets) {
  if (i < 0 || i >= g.n) throw input_error("vertex id out of range: " + std::to_string(i));
  std::vector<std::pair<int, int>> edges;
  for (auto [u, v] : g.edges)
    if (u != i) edges.emplace_back(u, v);
  for (int t : targets) edges.emplace_back(i, t);
  return Graph::from_edges(g.n, std::move(edges));
}

namespace {

struct FamilyData {
  int min_n;
  int k;
  std::vector<int> prediction;
  std::vector<std::vector<std::pair<int, int>>> graphs;
};

const FamilyData& family_data(InstanceFamily fam) {
  static const FamilyData fig3{
      2,
      1,
      {0},
      {
          {{1, 0}},
          {{0, 1}},
          {{0, 1}, {1, 0}},
      }};
  static const FamilyData fig4{
      4,
      1,
      {0},
      {
          {{2, 0}, {3, 1}, {0, 1}, {1, 0}},
          {{2, 0}, {3, 2}, {0, 1}, {1, 0}},
          {{0, 1}, {1, 2}, {2, 0}, {3, 1}},
      }};
  static const FamilyData fig5{
      3,
      2,
      {0, 1},
      {
          {{2, 0}, {2, 1}},
          {{0, 1}, {0, 2}},
          {{0, 2}, {1, 2}, {0, 1}, {1, 0}},
          {{0, 1}, {2, 1}, {0, 2}, {2, 0}},
          {{0, 1}, {0, 2}, {1, 0}, {1, 2}, {2, 0}, {2, 1}},
      }};
  static const FamilyData fig6{
      5,
      3,
      {0, 1, 2},
      {
          {{4, 0}, {4, 1}, {4, 2}},
          {{4, 0}, {4, 1}, {4, 2}, {4, 3}},
          {{0, 1}, {0, 2}, {0, 3}, {0, 4}},
          {{0, 1}, {0, 2}, {0, 3}, {4, 1}, {4, 2}, {0, 4}, {4, 0}},
          {{3, 0}, {3, 1}, {3, 2}, {4, 0}, {4, 1}, {4, 2}, {3, 4}, {4, 3}},
          {{0, 1}, {0, 2}, {0, 3}, {4, 1}, {4, 2}, {4, 3}, {0, 4}, {4, 0}},
          {{0, 2}, {0, 3}, {0, 4}, {1, 2}, {1, 3}, {1, 4}, {0, 1}, {1, 0}},
      }};
  switch (fam) {
    case InstanceFamily::Fig3OneSel: return fig3;
    case InstanceFamily::Fig4Plurality: return fig4;
    case InstanceFamily::Fig5TwoSel: return fig5;
    case InstanceFamily::Fig6ThreeSel: return fig6;
  }
  throw input_error("unknown instance family");
}

}  // namespace

int family_min_n(InstanceFamily fam) { return family_data(fam).min_n; }
int family_k(InstanceFamily fam) { return family_data(fam).k; }

std::string family_id(InstanceFamily fam) {
  switch (fam) {
    case InstanceFamily::Fig3OneSel: return "fig3";
    case InstanceFamily::Fig4Plurality: return "fig4";
    case InstanceFamily::Fig5TwoSel: return "fig5";
    case InstanceFamily::Fig6ThreeSel: return "fig6";
  }
  throw input_error("unknown instance family");
}

InstanceFamily family_from_id(const std::string& id) {
  if (id == "fig3") return InstanceFamily::Fig3OneSel;
  if (id == "fig4") return InstanceFamily::Fig4Plurality;
  if (id == "fig5") return InstanceFamily::Fig5TwoSel;
  if (id == "fig6") return InstanceFamily::Fig6ThreeSel;
  throw input_error("unknown instance family id: '" + id + "'");
}

std::vector<FigureInstance> gen_figure_family(InstanceFamily fam) {
  return gen_figure_family(fam, family_min_n(fam));
}

std::vector<FigureInstance> gen_figure_family(InstanceFamily fam, int n) {
  const FamilyData& data = family_data(fam);
  if (n < data.min_n)
    throw input_error("family " + family_id(fam) + " needs n >= " + std::to_string(data.min_n));
  std::vector<FigureInstance> out;
  out.reserve(data.graphs.size());
  for (const auto& edge_list : data.graphs)
    out.push_back({Graph::from_edges(n, edge_list), Prediction{data.prediction}});
  return out;
}

}  // namespace impsel
