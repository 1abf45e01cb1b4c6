#include "impsel/analysis.hpp"

#include <algorithm>

#include "impsel/errors.hpp"

namespace impsel {

std::string guarantee_kind_id(GuaranteeKind kind) {
  switch (kind) {
    case GuaranteeKind::RhoPermutation: return "rho-permutation";
    case GuaranteeKind::UniformPermutation: return "uniform-permutation";
    case GuaranteeKind::OnePermutationPlurality: return "one-permutation-plurality";
    case GuaranteeKind::PluralityMixture: return "plurality-mixture";
    case GuaranteeKind::FixedBidirectional: return "fixed-bidirectional";
    case GuaranteeKind::RandomizedK2Mixture: return "randomized-k2-mixture";
    case GuaranteeKind::DetK: return "det-k";
    case GuaranteeKind::RhoPartition: return "rho-partition";
    case GuaranteeKind::KPartitionBaseline: return "k-partition-baseline";
    case GuaranteeKind::TrivialPredicted: return "trivial-predicted";
  }
  throw input_error("unknown guarantee kind");
}

GuaranteeKind guarantee_kind_from_id(const std::string& id) {
  for (GuaranteeKind kind :
       {GuaranteeKind::RhoPermutation, GuaranteeKind::UniformPermutation,
        GuaranteeKind::OnePermutationPlurality, GuaranteeKind::PluralityMixture,
        GuaranteeKind::FixedBidirectional, GuaranteeKind::RandomizedK2Mixture,
        GuaranteeKind::DetK, GuaranteeKind::RhoPartition, GuaranteeKind::KPartitionBaseline,
        GuaranteeKind::TrivialPredicted})
    if (guarantee_kind_id(kind) == id) return kind;
  throw input_error("unknown guarantee kind: '" + id + "'");
}

Rational one_permutation_plurality_beta(long long delta) {
  if (delta < 2) throw input_error("beta(delta) needs delta >= 2");
  const Rational d = rat(delta);
  if (delta % 2 == 0) return (3 * d - 2) / (4 * d);
  return (3 * d * d - 2 * d - 1) / (4 * d * d);
}

namespace {

// Robustness of the prediction-free uniform permutation rule on plurality
// graphs with maximum indegree delta, used by the mixture formula.
Rational uniform_plurality_beta(long long delta) {
  if (delta < 2) throw input_error("beta(delta) needs delta >= 2");
  const Rational d = rat(delta);
  if (delta % 2 == 0) return (3 * d + 2) / (4 * (d + 1));
  return (3 * d - 1) / (4 * d);
}

GuaranteePair plurality_mixture_pair(long long delta, const Rational& rho) {
  // The mixture runs the 1-permutation rule with probability rho and the
  // uniform permutation rule otherwise.
  const Rational consistent = rho * 1 + (1 - rho) * uniform_plurality_beta(delta);
  const Rational robust =
      rho * one_permutation_plurality_beta(delta) + (1 - rho) * uniform_plurality_beta(delta);
  return {consistent, robust};
}

Rational require_rho(const GuaranteeParams& params, const Rational& lo) {
  if (!params.rho) throw input_error("guarantee needs rho");
  if (*params.rho < lo || *params.rho > 1)
    throw input_error("rho outside [" + rat_str(lo) + ",1]");
  return *params.rho;
}

int require_k(const GuaranteeParams& params, int lo) {
  if (!params.k) throw input_error("guarantee needs k");
  if (*params.k < lo) throw input_error("guarantee needs k >= " + std::to_string(lo));
  return *params.k;
}

}  // namespace

GuaranteePair guarantee_pair(GuaranteeKind kind, const GuaranteeParams& params) {
  switch (kind) {
    case GuaranteeKind::RhoPermutation: {
      const Rational rho = require_rho(params, rat(1, 2));
      return {rho, 1 - rho};
    }
    case GuaranteeKind::UniformPermutation: return {rat(1, 2), rat(1, 2)};
    case GuaranteeKind::OnePermutationPlurality: {
      const long long delta = params.delta.value_or(2);
      return {rat(1), one_permutation_plurality_beta(delta)};
    }
    case GuaranteeKind::PluralityMixture: {
      const Rational rho = require_rho(params, rat(0));
      long long delta = params.delta.value_or(2);
      if (delta % 2 == 1) {
        // consistency formula coincides with the next-lower even Delta
        GuaranteePair even = plurality_mixture_pair(delta - 1, rho);
        GuaranteePair odd = plurality_mixture_pair(delta, rho);
        return {even.alpha, odd.beta};
      }
      return plurality_mixture_pair(delta, rho);
    }
    case GuaranteeKind::FixedBidirectional: return {rat(1), rat(1, 2)};
    case GuaranteeKind::RandomizedK2Mixture: {
      const Rational rho = require_rho(params, rat(0));
      return {rat(2, 3) + rho / 3, rat(2, 3) - rho / 6};
    }
    case GuaranteeKind::DetK: {
      const int k = require_k(params, 2);
      return {rat(1), rat(1, k)};
    }
    case GuaranteeKind::RhoPartition: {
      const Rational rho = require_rho(params, rat(1, 2));
      const int k = require_k(params, 1);
      const Rational alpha = 1 - (1 - rho) / k;
      const Rational beta = (1 - 2 * rho / (k + 1)) *
                            (1 - rat_pow(rat(k - 1, k), static_cast<unsigned long>(k)));
      return {alpha, beta};
    }
    case GuaranteeKind::KPartitionBaseline: {
      const int k = require_k(params, 1);
      const Rational gamma = rat(k, k + 1) *
                             (1 - rat_pow(rat(k - 1, k), static_cast<unsigned long>(k + 1)));
      return {gamma, gamma};
    }
    case GuaranteeKind::TrivialPredicted: return {rat(1), rat(0)};
  }
  throw input_error("unknown guarantee kind");
}

Rational smoothness(const Rational& alpha, const Rational& beta, const Rational& eta) {
  if (!rat_in_unit_interval(alpha) || !rat_in_unit_interval(beta) || !rat_in_unit_interval(eta))
    throw input_error("smoothness inputs must lie in [0,1]");
  const Rational degraded = alpha * (1 - eta);
  return std::max(degraded, beta);
}

Rational claim3_closed(int k, int p) {
  if (k < 1) throw input_error("claim3 needs k >= 1");
  if (p < 0 || p > k - 1) throw input_error("claim3 needs 0 <= p <= k-1");
  const Rational ratio_pow = rat_pow(rat(k - 1, k), static_cast<unsigned long>(k - p));
  const Rational numer =
      rat(k) * rat(k - 2 * p + 1) -
      (rat(k) * k + k - rat(3) * p * k + rat(p) * p) * ratio_pow;
  return numer / (rat(k - p + 1) * rat(k - p));
}

Rational claim3_direct(int k, int p) {
  if (k < 1) throw input_error("claim3 needs k >= 1");
  if (p < 0 || p > k - 1) throw input_error("claim3 needs 0 <= p <= k-1");
  const int m = k - p - 1;
  Rational sum_over2 = 0;  // weights 1/(l+2)
  Rational sum_over1 = 0;  // weights 1/(l+1)
  for (int l = 0; l <= m; ++l) {
    const Rational term = Rational(big_binomial(m, l)) *
                          rat_pow(rat(1, k), static_cast<unsigned long>(l)) *
                          rat_pow(rat(k - 1, k), static_cast<unsigned long>(m - l));
    sum_over2 += term / (l + 2);
    sum_over1 += term / (l + 1);
  }
  return rat(p, k) * sum_over2 + rat(k - p, k) * sum_over1;
}

Rational g_value(int k, int p) { return claim3_closed(k, p); }

bool g_monotone_check(int k) {
  if (k < 1) throw input_error("g_monotone_check needs k >= 1");
  for (int p = 0; p + 1 <= k - 1; ++p)
    if (g_value(k, p) < g_value(k, p + 1)) return false;
  return true;
}

std::string setting_id(BoundSetting setting) {
  switch (setting) {
    case BoundSetting::Sel1: return "sel1";
    case BoundSetting::Sel1Plurality: return "sel1-plurality";
    case BoundSetting::Sel2: return "sel2";
    case BoundSetting::Sel3: return "sel3";
  }
  throw input_error("unknown bound setting");
}

BoundSetting setting_from_id(const std::string& id) {
  for (BoundSetting s :
       {BoundSetting::Sel1, BoundSetting::Sel1Plurality, BoundSetting::Sel2, BoundSetting::Sel3})
    if (setting_id(s) == id) return s;
  throw input_error("unknown bound setting: '" + id + "'");
}

BoundRegion upper_bound_region(BoundSetting setting) {
  BoundRegion region{setting, {}};
  switch (setting) {
    case BoundSetting::Sel1:
      region.constraints = {{rat(0), rat(1), rat(1, 2), "beta <= 1/2"},
                            {rat(1), rat(1), rat(1), "alpha + beta <= 1"}};
      break;
    case BoundSetting::Sel1Plurality:
    case BoundSetting::Sel2:
      region.constraints = {{rat(0), rat(1), rat(3, 4), "beta <= 3/4"},
                            {rat(1), rat(1), rat(3, 2), "alpha + beta <= 3/2"}};
      break;
    case BoundSetting::Sel3:
      region.constraints = {{rat(0), rat(1), rat(4, 5), "beta <= 4/5"},
                            {rat(4), rat(3), rat(6), "4 alpha + 3 beta <= 6"},
                            {rat(4), rat(21), rat(20), "4 alpha + 21 beta <= 20"}};
      break;
  }
  return region;
}

bool region_contains(const BoundRegion& region, const Rational& alpha, const Rational& beta) {
  for (const auto& c : region.constraints)
    if (c.coef_alpha * alpha + c.coef_beta * beta > c.rhs) return false;
  return true;
}

}  // namespace impsel
