#pragma once

#include <optional>
#include <string>
#include <vector>

#include "impsel/rational.hpp"

namespace impsel {

// Consistency/robustness pair of a mechanism configuration, exact rationals.
struct GuaranteePair {
  Rational alpha;
  Rational beta;
};

enum class GuaranteeKind {
  RhoPermutation,           // (rho, 1-rho), rho in [1/2, 1]
  UniformPermutation,       // (1/2, 1/2)
  OnePermutationPlurality,  // (1, beta(Delta)) on plurality graphs
  PluralityMixture,         // rho-lottery of the two above, Delta-parameterized
  FixedBidirectional,       // (1, 1/2)
  RandomizedK2Mixture,      // (2/3 + rho/3, 2/3 - rho/6)
  DetK,                     // (1, 1/k)
  RhoPartition,             // (1 - (1-rho)/k, (1 - 2rho/(k+1)) (1 - ((k-1)/k)^k))
  KPartitionBaseline,       // alpha = beta = k/(k+1) (1 - ((k-1)/k)^(k+1))
  TrivialPredicted,         // (1, 0)
};

std::string guarantee_kind_id(GuaranteeKind kind);
GuaranteeKind guarantee_kind_from_id(const std::string& id);

struct GuaranteeParams {
  std::optional<Rational> rho;
  std::optional<int> k;
  std::optional<long long> delta;  // maximum indegree, for Delta-parameterized bounds
};

// Exact (alpha, beta) for the given configuration. Delta-parameterized kinds
// evaluate at the supplied Delta, or at the global worst case Delta = 2 when
// none is given (the Delta-formulas are non-decreasing).
GuaranteePair guarantee_pair(GuaranteeKind kind, const GuaranteeParams& params);

// Fine-grained robustness of the 1-permutation rule on plurality graphs with
// maximum indegree delta >= 2:
//   (3d-2)/(4d) for even d, (3d^2-2d-1)/(4d^2) for odd d.
Rational one_permutation_plurality_beta(long long delta);

// Guarantee achieved with a prediction of error eta: max{alpha (1-eta), beta}.
Rational smoothness(const Rational& alpha, const Rational& beta, const Rational& eta);

// Probability that a fixed optimal vertex is the one sampled in its partition
// set, as a closed form in (k, p):
//   ( k(k-2p+1) - (k^2+k-3pk+p^2) ((k-1)/k)^(k-p) ) / ((k-p+1)(k-p)).
Rational claim3_closed(int k, int p);

// The same probability as the binomially weighted double sum
//   (p/k)   sum_l 1/(l+2) C(k-p-1,l) (1/k)^l ((k-1)/k)^(k-p-1-l)
// + ((k-p)/k) sum_l 1/(l+1) C(k-p-1,l) (1/k)^l ((k-1)/k)^(k-p-1-l),
// kept as an independent route against claim3_closed.
Rational claim3_direct(int k, int p);

Rational g_value(int k, int p);  // alias of claim3_closed
bool g_monotone_check(int k);    // g_value(k, p) >= g_value(k, p+1) for all p

enum class BoundSetting { Sel1, Sel1Plurality, Sel2, Sel3 };

std::string setting_id(BoundSetting setting);
BoundSetting setting_from_id(const std::string& id);

// One inequality coef_alpha * alpha + coef_beta * beta <= rhs.
struct LinearConstraint {
  Rational coef_alpha;
  Rational coef_beta;
  Rational rhs;
  std::string name;
};

struct BoundRegion {
  BoundSetting setting;
  std::vector<LinearConstraint> constraints;
};

// Feasible (alpha, beta) region for impartial mechanisms in each setting:
//   Sel1:          beta <= 1/2,  alpha + beta <= 1
//   Sel1Plurality: beta <= 3/4,  alpha + beta <= 3/2
//   Sel2:          beta <= 3/4,  alpha + beta <= 3/2
//   Sel3:          beta <= 4/5,  4 alpha + 3 beta <= 6,  4 alpha + 21 beta <= 20
BoundRegion upper_bound_region(BoundSetting setting);

bool region_contains(const BoundRegion& region, const Rational& alpha, const Rational& beta);

}  // namespace impsel
