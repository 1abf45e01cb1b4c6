#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "impsel/rational.hpp"

namespace impsel {

// Nomination digraph: simple, directed, no self-loops, vertices 0..n-1.
// An edge (u, v) means u nominates v. Edges are kept sorted and unique.
struct Graph {
  int n = 0;
  std::vector<std::pair<int, int>> edges;
  std::vector<std::vector<int>> in_adj;
  std::vector<std::vector<int>> out_adj;

  // Validates endpoints and drops duplicates (set semantics).
  static Graph from_edges(int n, std::vector<std::pair<int, int>> edge_list);

  bool has_edge(int u, int v) const;
  int out_degree(int v) const { return static_cast<int>(out_adj[v].size()); }
  long long edge_count() const { return static_cast<long long>(edges.size()); }

  bool operator==(const Graph& other) const { return n == other.n && edges == other.edges; }
};

// Ordered set of k distinct predicted vertices. The order matters to the
// mechanisms that assign per-slot roles (partition sets, permutation ends).
struct Prediction {
  std::vector<int> vertices;

  int k() const { return static_cast<int>(vertices.size()); }
  bool contains(int v) const;
};

void validate_prediction(const Graph& g, const Prediction& p);

int indegree(const Graph& g, int i);
int indegree_from(const Graph& g, const std::vector<int>& sources, int i);

// Total indegree of a vertex set.
long long set_indegree(const Graph& g, const std::vector<int>& vs);

struct MaxKIndegree {
  long long delta = 0;
  std::vector<int> witness;  // sorted ids; lexicographically smallest optimum
};

// Maximum total indegree over all k-vertex sets. Exhaustive for n <= 20,
// greedy top-k by indegree beyond that; the objective is a sum of independent
// per-vertex indegrees, so both coincide.
MaxKIndegree max_k_indegree(const Graph& g, int k);

// True iff every vertex has outdegree exactly one.
bool is_plurality(const Graph& g);

// Normalized prediction error (Delta_k - indegree(predicted set)) / Delta_k,
// in [0, 1]; defined as 0 when Delta_k == 0.
Rational prediction_error(const Graph& g, const Prediction& p);

// Each ordered non-self pair becomes an edge independently with edge_prob.
Graph gen_random(int n, double edge_prob, std::uint64_t seed);

// Every vertex nominates one uniformly chosen other vertex; n >= 2.
Graph gen_random_plurality(int n, std::uint64_t seed);

// Copy of g with vertex i's outgoing edges replaced by i -> t for t in targets.
// Everything another vertex controls is untouched; this is the probe used by
// the impartiality audits.
Graph with_out_edges(const Graph& g, int i, const std::vector<int>& targets);

// Hard-coded worst-case instance families used by the bound audits, given as
// exact graph/prediction pairs. Undrawn padding vertices are isolated.
enum class InstanceFamily { Fig3OneSel, Fig4Plurality, Fig5TwoSel, Fig6ThreeSel };

struct FigureInstance {
  Graph graph;
  Prediction prediction;
};

int family_min_n(InstanceFamily fam);
int family_k(InstanceFamily fam);
std::string family_id(InstanceFamily fam);
InstanceFamily family_from_id(const std::string& id);

std::vector<FigureInstance> gen_figure_family(InstanceFamily fam);
std::vector<FigureInstance> gen_figure_family(InstanceFamily fam, int n);

}  // namespace impsel
