#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "impsel/graph.hpp"
#include "impsel/rational.hpp"
#include "impsel/rng.hpp"

namespace impsel {

// Priority values in [0,1] attached to the vertices of an eligible set; they
// induce the permutation used by the candidate scan (ascending value, ties to
// the smaller vertex id).
using PriorityVector = std::map<int, double>;

// Orders s ascending by priority; keys(x) must equal s exactly.
std::vector<int> induced_permutation(const PriorityVector& x, const std::vector<int>& s);

// Indegree of i restricted to sources outside the eligible set plus vertices
// earlier than i in the permutation ("indegree from the left").
int observed_indegree(const Graph& g, const std::vector<int>& s, const std::vector<int>& perm,
                      int i);

// Candidate scan over an explicit permutation of the eligible set. Walks left
// to right keeping a current candidate and its observed indegree d; a vertex
// takes over when its own observed indegree, not counting a nomination coming
// from the current candidate, reaches d. Returns the final candidate.
int permutation_select_perm(const Graph& g, const std::vector<int>& perm);

// Same scan with the permutation induced by a priority vector over s.
int permutation_select(const Graph& g, const std::vector<int>& s, const PriorityVector& x);

// One-vertex selection: the predicted vertex gets fixed priority rho, all
// others are sampled uniformly on [0,1) in ascending id order.
int rho_permutation(const Graph& g, int predicted, const Rational& rho, Rng& rng);

// One-vertex selection with all priorities sampled uniformly.
int uniform_permutation(const Graph& g, Rng& rng);

// Two-vertex selection: pins the predicted pair to the two ends of a fixed
// permutation and runs the scan in both directions (priorities x and 1-x).
// interior == nullptr picks the default priorities (i+1)/(n+1); supplied
// priorities must be strictly inside (0,1).
std::vector<int> fixed_bidirectional(const Graph& g, std::pair<int, int> predicted,
                                     const PriorityVector* interior = nullptr);

// Prediction-free two-vertex selection: uniform priorities, both directions.
std::vector<int> randomized_bidirectional(const Graph& g, Rng& rng);

// Deterministic k-selection: the first k-2 predicted vertices verbatim plus a
// fixed bidirectional pass with the last two predicted vertices at the ends.
std::vector<int> det_k_selection(const Graph& g, const Prediction& p);

// k-selection: non-predicted vertices are assigned to one of k sets uniformly
// (ascending id order); set j holds predicted vertex j with priority rho and
// the scan is run per set with all external nominations counted.
std::vector<int> rho_partition(const Graph& g, const Prediction& p, const Rational& rho, Rng& rng);

// Prediction-free baseline: all vertices assigned uniformly, uniform internal
// priorities, one selection per nonempty set (output may be smaller than k).
std::vector<int> k_partition_baseline(const Graph& g, int k, Rng& rng);

enum class MechanismKind {
  RhoPermutation,
  UniformPermutation,
  FixedBidirectional,
  RandomizedBidirectional,
  DetK,
  RhoPartition,
  KPartitionBaseline,
  TrivialPredicted,
  Lottery,
};

std::string kind_id(MechanismKind kind);
MechanismKind kind_from_id(const std::string& id);

// Configuration umbrella for every selection rule. rho is present iff the
// kind uses it; sub-specs are present iff kind == Lottery.
struct MechanismSpec {
  MechanismKind kind = MechanismKind::UniformPermutation;
  std::optional<Rational> rho;
  std::optional<int> k;
  std::optional<Rational> mix_weight;
  std::shared_ptr<MechanismSpec> a;
  std::shared_ptr<MechanismSpec> b;

  static MechanismSpec rho_permutation(const Rational& rho);
  static MechanismSpec uniform_permutation();
  static MechanismSpec fixed_bidirectional();
  static MechanismSpec randomized_bidirectional();
  static MechanismSpec det_k(int k);
  static MechanismSpec rho_partition(int k, const Rational& rho);
  static MechanismSpec k_partition_baseline(int k);
  static MechanismSpec trivial_predicted();
  static MechanismSpec lottery(const Rational& weight, MechanismSpec a, MechanismSpec b);

  std::string describe() const;
};

void validate_spec(const MechanismSpec& spec);

bool spec_needs_prediction(const MechanismSpec& spec);

// Number of vertices the configured mechanism selects (an upper bound for
// the baseline kinds). Checks the prediction size where one is required.
int mechanism_k(const MechanismSpec& spec, const Prediction* p);

// One draw of the configured mechanism; returns the selected set sorted.
std::vector<int> execute_draw(const MechanismSpec& spec, const Graph& g, const Prediction* p,
                              Rng& rng);

// Runs spec_a with probability weight, else spec_b (one Bernoulli decision,
// then delegates to the chosen spec on the same stream).
std::vector<int> lottery(const Rational& weight, const MechanismSpec& spec_a,
                         const MechanismSpec& spec_b, const Graph& g, const Prediction* p,
                         Rng& rng);

}  // namespace impsel
