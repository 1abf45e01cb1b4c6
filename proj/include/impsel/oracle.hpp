#pragma once

#include <string>
#include <vector>

#include "impsel/analysis.hpp"
#include "impsel/graph.hpp"
#include "impsel/mechanisms.hpp"
#include "impsel/rational.hpp"

namespace impsel {

// Per-vertex exact selection probabilities of a mechanism on one instance.
struct ExactDistribution {
  std::vector<Rational> probs;

  Rational mass() const;
  bool operator==(const ExactDistribution& other) const { return probs == other.probs; }
};

// Cap on candidate-scan evaluations a single enumeration may spend.
inline constexpr long long kDefaultNodeBudget = 50'000'000;

// Number of candidate-scan evaluations the exact enumeration would need;
// resolved_k stands in for a missing spec.k on the partition kinds.
long long enumeration_cost(const MechanismSpec& spec, int n, int resolved_k = 1);

// Exact selection probabilities by total enumeration of the mechanism's
// randomness: permutation kinds enumerate arrangements of the non-fixed
// vertices together with the cut position of the fixed-priority vertex;
// partition kinds additionally enumerate the set assignments. Throws
// budget_error when the instance exceeds node_budget.
ExactDistribution exact_distribution(const MechanismSpec& spec, const Graph& g,
                                     const Prediction* p,
                                     long long node_budget = kDefaultNodeBudget);

// Exact expected total indegree of the selected set, sum_i f_i indegree(i).
Rational expected_indegree(const ExactDistribution& dist, const Graph& g);

// True iff vertex i's exact selection probability is identical across every
// choice of i's outgoing edges (all 2^(n-1) subsets, or the n-1 single
// targets in plurality mode).
bool impartiality_audit(const MechanismSpec& spec, const Graph& g, const Prediction* p,
                        int vertex, bool plurality_mode = false,
                        long long node_budget = kDefaultNodeBudget);

// All vertex relabelings that map predicted vertices to predicted vertices.
std::vector<std::vector<int>> s_invariant_permutations(int n, const std::vector<int>& predicted);

Graph relabel_graph(const Graph& g, const std::vector<int>& perm);

// Average of the relabeled exact distributions over all prediction-invariant
// relabelings; the result is the distribution of the symmetrized mechanism.
ExactDistribution symmetrize(const MechanismSpec& spec, const Graph& g, const Prediction& p,
                             long long node_budget = kDefaultNodeBudget);

// Exhaustively enumerates the permutations with the predicted vertex fixed
// last and checks P[B_r | A_s] >= P[B_r | A_r], where A_t is the event that
// vertex i has exactly t nominators to its left and B_r the event that some
// other vertex has at least r nominators to its left. Requires a plurality
// graph, i != predicted, and 0 <= s < r <= indegree(i) minus one when the
// predicted vertex nominates i.
bool correlation_audit(const Graph& g, int predicted, int i, int r, int s);

struct BoundConstraintResult {
  std::string name;
  Rational lhs;
  Rational rhs;
  bool pass;
};

struct BoundInstanceRow {
  int index = 0;
  long long delta_k = 0;
  long long predicted_indegree = 0;
  bool accurate = false;
  Rational expected;
  Rational ratio;
};

struct BoundAuditReport {
  BoundSetting setting;
  std::string mechanism;
  std::vector<BoundInstanceRow> instances;
  std::vector<Rational> p_values;
  std::vector<std::string> linkage_failures;  // empty iff the p labels are consistent
  Rational alpha_hat;  // min ratio over accurate-prediction instances
  Rational beta_hat;   // min ratio over all instances
  std::vector<BoundConstraintResult> constraints;
  bool linkage_ok = false;
  bool pass = false;
};

InstanceFamily setting_family(BoundSetting setting);

// Evaluates the symmetrized mechanism on the setting's instance family and
// checks: (a) slots sharing a probability label carry equal exact values,
// (b) per-instance probability mass at most k plus the setting's linear
// inequalities in the labels, and (c) that the measured (alpha_hat, beta_hat)
// lie inside the setting's feasible region.
BoundAuditReport bound_audit(BoundSetting setting, const MechanismSpec& spec,
                             long long node_budget = kDefaultNodeBudget);

}  // namespace impsel
