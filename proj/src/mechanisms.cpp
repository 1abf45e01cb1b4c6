#include "impsel/mechanisms.hpp"

#include <algorithm>
#include <set>

#include "impsel/errors.hpp"

namespace impsel {

std::vector<int> induced_permutation(const PriorityVector& x, const std::vector<int>& s) {
  if (x.size() != s.size()) throw input_error("priority keys do not match the eligible set");
  std::vector<std::pair<double, int>> order;
  order.reserve(s.size());
  for (int v : s) {
    auto it = x.find(v);
    if (it == x.end()) throw input_error("missing priority for vertex " + std::to_string(v));
    order.emplace_back(it->second, v);
  }
  std::sort(order.begin(), order.end());  // ties fall to the smaller id
  std::vector<int> perm;
  perm.reserve(order.size());
  for (auto& [val, v] : order) perm.push_back(v);
  return perm;
}

int observed_indegree(const Graph& g, const std::vector<int>& s, const std::vector<int>& perm,
                      int i) {
  if (perm.size() != s.size()) throw input_error("perm is not a permutation of the eligible set");
  std::vector<int> pos(g.n, -1);
  for (std::size_t r = 0; r < perm.size(); ++r) {
    int v = perm[r];
    if (v < 0 || v >= g.n || pos[v] != -1)
      throw input_error("perm is not a permutation of the eligible set");
    pos[v] = static_cast<int>(r);
  }
  for (int v : s)
    if (v < 0 || v >= g.n || pos[v] == -1)
      throw input_error("perm is not a permutation of the eligible set");
  if (i < 0 || i >= g.n || pos[i] == -1)
    throw input_error("vertex " + std::to_string(i) + " is not in the eligible set");
  int count = 0;
  for (int w : g.in_adj[i])
    if (pos[w] == -1 || pos[w] < pos[i]) ++count;
  return count;
}

int permutation_select_perm(const Graph& g, const std::vector<int>& perm) {
  if (perm.empty()) throw input_error("eligible set must be nonempty");
  std::vector<int> pos(g.n, -1);
  for (std::size_t r = 0; r < perm.size(); ++r) {
    int v = perm[r];
    if (v < 0 || v >= g.n || pos[v] != -1) throw input_error("invalid permutation");
    pos[v] = static_cast<int>(r);
  }
  int candidate = perm[0];
  int d = 0;
  for (int w : g.in_adj[candidate])
    if (pos[w] == -1) ++d;  // nominations from outside the eligible set
  for (std::size_t r = 1; r < perm.size(); ++r) {
    const int i = perm[r];
    int seen = 0;
    bool candidate_nominates = false;
    for (int w : g.in_adj[i]) {
      if (pos[w] == -1 || pos[w] < static_cast<int>(r)) {
        ++seen;
        if (w == candidate) candidate_nominates = true;
      }
    }
    // The potential nomination from the current candidate is excluded in the
    // takeover test but counts toward the new score once i takes over.
    if (seen - (candidate_nominates ? 1 : 0) >= d) {
      candidate = i;
      d = seen;
    }
  }
  return candidate;
}

int permutation_select(const Graph& g, const std::vector<int>& s, const PriorityVector& x) {
  if (s.empty()) throw input_error("eligible set must be nonempty");
  return permutation_select_perm(g, induced_permutation(x, s));
}

namespace {

std::vector<int> all_vertices(const Graph& g) {
  std::vector<int> s(g.n);
  for (int i = 0; i < g.n; ++i) s[i] = i;
  return s;
}

void require_vertex(const Graph& g, int v) {
  if (v < 0 || v >= g.n) throw input_error("vertex id out of range: " + std::to_string(v));
}

}  // namespace

int rho_permutation(const Graph& g, int predicted, const Rational& rho, Rng& rng) {
  require_vertex(g, predicted);
  if (!rat_in_unit_interval(rho)) throw input_error("rho outside [0,1]");
  PriorityVector x;
  x[predicted] = rat_double(rho);
  for (int i = 0; i < g.n; ++i)
    if (i != predicted) x[i] = rng.next_double();
  return permutation_select(g, all_vertices(g), x);
}

int uniform_permutation(const Graph& g, Rng& rng) {
  PriorityVector x;
  for (int i = 0; i < g.n; ++i) x[i] = rng.next_double();
  return permutation_select(g, all_vertices(g), x);
}

namespace {

std::vector<int> run_both_directions(const Graph& g, const PriorityVector& x) {
  const std::vector<int> s = all_vertices(g);
  PriorityVector reversed;
  for (auto& [v, val] : x) reversed[v] = 1.0 - val;
  const int first = permutation_select(g, s, x);
  const int second = permutation_select(g, s, reversed);
  std::vector<int> out{first};
  if (second != first) out.push_back(second);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

std::vector<int> fixed_bidirectional(const Graph& g, std::pair<int, int> predicted,
                                     const PriorityVector* interior) {
  auto [i1, i2] = predicted;
  require_vertex(g, i1);
  require_vertex(g, i2);
  if (i1 == i2) throw input_error("predicted pair must be distinct");
  PriorityVector x;
  x[i1] = 0.0;
  x[i2] = 1.0;
  for (int i = 0; i < g.n; ++i) {
    if (i == i1 || i == i2) continue;
    double val;
    if (interior != nullptr) {
      auto it = interior->find(i);
      if (it == interior->end())
        throw input_error("missing interior priority for vertex " + std::to_string(i));
      val = it->second;
    } else {
      val = static_cast<double>(i + 1) / static_cast<double>(g.n + 1);
    }
    if (val <= 0.0 || val >= 1.0)
      throw input_error("interior priority must lie strictly inside (0,1)");
    x[i] = val;
  }
  return run_both_directions(g, x);
}

std::vector<int> randomized_bidirectional(const Graph& g, Rng& rng) {
  if (g.n < 2) throw input_error("bidirectional selection needs at least two vertices");
  PriorityVector x;
  for (int i = 0; i < g.n; ++i) x[i] = rng.next_double();
  return run_both_directions(g, x);
}

std::vector<int> det_k_selection(const Graph& g, const Prediction& p) {
  validate_prediction(g, p);
  const int k = p.k();
  if (k < 2) throw input_error("deterministic k-selection needs k >= 2");
  std::vector<int> out(p.vertices.begin(), p.vertices.end() - 2);
  const auto pair = fixed_bidirectional(g, {p.vertices[k - 2], p.vertices[k - 1]});
  for (int v : pair)
    if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<int> rho_partition(const Graph& g, const Prediction& p, const Rational& rho,
                               Rng& rng) {
  validate_prediction(g, p);
  if (!rat_in_unit_interval(rho)) throw input_error("rho outside [0,1]");
  const int k = p.k();
  std::vector<char> predicted(g.n, 0);
  for (int v : p.vertices) predicted[v] = 1;

  std::vector<std::vector<int>> sets(k);
  for (int j = 0; j < k; ++j) sets[j].push_back(p.vertices[j]);
  for (int i = 0; i < g.n; ++i) {
    if (predicted[i]) continue;
    sets[rng.next_below(static_cast<std::uint64_t>(k))].push_back(i);
  }

  const double rho_val = rat_double(rho);
  std::vector<int> out;
  out.reserve(k);
  for (int j = 0; j < k; ++j) {
    std::sort(sets[j].begin(), sets[j].end());
    PriorityVector x;
    x[p.vertices[j]] = rho_val;
    for (int v : sets[j])
      if (v != p.vertices[j]) x[v] = rng.next_double();
    out.push_back(permutation_select(g, sets[j], x));
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<int> k_partition_baseline(const Graph& g, int k, Rng& rng) {
  if (k < 1 || k > g.n) throw input_error("k out of range: " + std::to_string(k));
  std::vector<std::vector<int>> sets(k);
  for (int i = 0; i < g.n; ++i) sets[rng.next_below(static_cast<std::uint64_t>(k))].push_back(i);
  std::vector<int> out;
  for (int j = 0; j < k; ++j) {
    if (sets[j].empty()) continue;
    PriorityVector x;
    for (int v : sets[j]) x[v] = rng.next_double();
    out.push_back(permutation_select(g, sets[j], x));
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::string kind_id(MechanismKind kind) {
  switch (kind) {
    case MechanismKind::RhoPermutation: return "rho-permutation";
    case MechanismKind::UniformPermutation: return "uniform-permutation";
    case MechanismKind::FixedBidirectional: return "fixed-bidirectional";
    case MechanismKind::RandomizedBidirectional: return "randomized-bidirectional";
    case MechanismKind::DetK: return "det-k";
    case MechanismKind::RhoPartition: return "rho-partition";
    case MechanismKind::KPartitionBaseline: return "k-partition-baseline";
    case MechanismKind::TrivialPredicted: return "trivial-predicted";
    case MechanismKind::Lottery: return "lottery";
  }
  throw input_error("unknown mechanism kind");
}

MechanismKind kind_from_id(const std::string& id) {
  for (MechanismKind kind :
       {MechanismKind::RhoPermutation, MechanismKind::UniformPermutation,
        MechanismKind::FixedBidirectional, MechanismKind::RandomizedBidirectional,
        MechanismKind::DetK, MechanismKind::RhoPartition, MechanismKind::KPartitionBaseline,
        MechanismKind::TrivialPredicted, MechanismKind::Lottery})
    if (kind_id(kind) == id) return kind;
  throw input_error("unknown mechanism kind: '" + id + "'");
}

MechanismSpec MechanismSpec::rho_permutation(const Rational& rho) {
  MechanismSpec s;
  s.kind = MechanismKind::RhoPermutation;
  s.rho = rho;
  return s;
}

MechanismSpec MechanismSpec::uniform_permutation() {
  MechanismSpec s;
  s.kind = MechanismKind::UniformPermutation;
  return s;
}

MechanismSpec MechanismSpec::fixed_bidirectional() {
  MechanismSpec s;
  s.kind = MechanismKind::FixedBidirectional;
  return s;
}

MechanismSpec MechanismSpec::randomized_bidirectional() {
  MechanismSpec s;
  s.kind = MechanismKind::RandomizedBidirectional;
  return s;
}

MechanismSpec MechanismSpec::det_k(int k) {
  MechanismSpec s;
  s.kind = MechanismKind::DetK;
  s.k = k;
  return s;
}

MechanismSpec MechanismSpec::rho_partition(int k, const Rational& rho) {
  MechanismSpec s;
  s.kind = MechanismKind::RhoPartition;
  s.k = k;
  s.rho = rho;
  return s;
}

MechanismSpec MechanismSpec::k_partition_baseline(int k) {
  MechanismSpec s;
  s.kind = MechanismKind::KPartitionBaseline;
  s.k = k;
  return s;
}

MechanismSpec MechanismSpec::trivial_predicted() {
  MechanismSpec s;
  s.kind = MechanismKind::TrivialPredicted;
  return s;
}

MechanismSpec MechanismSpec::lottery(const Rational& weight, MechanismSpec a, MechanismSpec b) {
  MechanismSpec s;
  s.kind = MechanismKind::Lottery;
  s.mix_weight = weight;
  s.a = std::make_shared<MechanismSpec>(std::move(a));
  s.b = std::make_shared<MechanismSpec>(std::move(b));
  return s;
}

std::string MechanismSpec::describe() const {
  std::string out = kind_id(kind);
  if (rho) out += " rho=" + rat_str(*rho);
  if (k) out += " k=" + std::to_string(*k);
  if (kind == MechanismKind::Lottery)
    out += " w=" + rat_str(*mix_weight) + " [" + a->describe() + " | " + b->describe() + "]";
  return out;
}

void validate_spec(const MechanismSpec& spec) {
  const bool uses_rho =
      spec.kind == MechanismKind::RhoPermutation || spec.kind == MechanismKind::RhoPartition;
  if (uses_rho) {
    if (!spec.rho) throw input_error(kind_id(spec.kind) + " needs rho");
    if (!rat_in_unit_interval(*spec.rho)) throw input_error("rho outside [0,1]");
  } else if (spec.rho) {
    throw input_error(kind_id(spec.kind) + " does not take rho");
  }
  if (spec.kind == MechanismKind::Lottery) {
    if (!spec.mix_weight || !spec.a || !spec.b)
      throw input_error("lottery needs mix_weight and two sub-specs");
    if (!rat_in_unit_interval(*spec.mix_weight)) throw input_error("mix_weight outside [0,1]");
    validate_spec(*spec.a);
    validate_spec(*spec.b);
  } else if (spec.mix_weight || spec.a || spec.b) {
    throw input_error(kind_id(spec.kind) + " does not take lottery fields");
  }
  if (spec.kind == MechanismKind::DetK && spec.k && *spec.k < 2)
    throw input_error("det-k needs k >= 2");
}

bool spec_needs_prediction(const MechanismSpec& spec) {
  switch (spec.kind) {
    case MechanismKind::UniformPermutation:
    case MechanismKind::RandomizedBidirectional:
    case MechanismKind::KPartitionBaseline: return false;
    case MechanismKind::Lottery: return spec_needs_prediction(*spec.a) || spec_needs_prediction(*spec.b);
    default: return true;
  }
}

int mechanism_k(const MechanismSpec& spec, const Prediction* p) {
  auto check_pred_k = [&](int expected) {
    if (p != nullptr && p->k() != expected)
      throw input_error("prediction size " + std::to_string(p->k()) + " does not match " +
                        kind_id(spec.kind) + " with k=" + std::to_string(expected));
    return expected;
  };
  switch (spec.kind) {
    case MechanismKind::RhoPermutation: return check_pred_k(1);
    case MechanismKind::UniformPermutation: return 1;
    case MechanismKind::FixedBidirectional: return check_pred_k(2);
    case MechanismKind::RandomizedBidirectional: return 2;
    case MechanismKind::DetK:
      if (spec.k) return check_pred_k(*spec.k);
      if (p == nullptr) throw input_error("det-k needs a prediction or an explicit k");
      return p->k();
    case MechanismKind::RhoPartition:
      if (spec.k) return check_pred_k(*spec.k);
      if (p == nullptr) throw input_error("rho-partition needs a prediction or an explicit k");
      return p->k();
    case MechanismKind::KPartitionBaseline:
      if (!spec.k) throw input_error("k-partition-baseline needs k");
      return *spec.k;
    case MechanismKind::TrivialPredicted:
      if (spec.k) return check_pred_k(*spec.k);
      if (p == nullptr) throw input_error("trivial-predicted needs a prediction");
      return p->k();
    case MechanismKind::Lottery: {
      const int ka = mechanism_k(*spec.a, p);
      const int kb = mechanism_k(*spec.b, p);
      if (ka != kb)
        throw input_error("lottery sub-specs select different sizes: " + std::to_string(ka) +
                          " vs " + std::to_string(kb));
      return ka;
    }
  }
  throw input_error("unknown mechanism kind");
}

std::vector<int> lottery(const Rational& weight, const MechanismSpec& spec_a,
                         const MechanismSpec& spec_b, const Graph& g, const Prediction* p,
                         Rng& rng) {
  if (!rat_in_unit_interval(weight)) throw input_error("mix weight outside [0,1]");
  MechanismSpec combined = MechanismSpec::lottery(weight, spec_a, spec_b);
  return execute_draw(combined, g, p, rng);
}

std::vector<int> execute_draw(const MechanismSpec& spec, const Graph& g, const Prediction* p,
                              Rng& rng) {
  validate_spec(spec);
  if (spec_needs_prediction(spec)) {
    if (p == nullptr) throw input_error(kind_id(spec.kind) + " needs a prediction");
    validate_prediction(g, *p);
  }
  mechanism_k(spec, p);  // size compatibility
  switch (spec.kind) {
    case MechanismKind::RhoPermutation:
      return {rho_permutation(g, p->vertices[0], *spec.rho, rng)};
    case MechanismKind::UniformPermutation: return {uniform_permutation(g, rng)};
    case MechanismKind::FixedBidirectional:
      return fixed_bidirectional(g, {p->vertices[0], p->vertices[1]});
    case MechanismKind::RandomizedBidirectional: return randomized_bidirectional(g, rng);
    case MechanismKind::DetK: return det_k_selection(g, *p);
    case MechanismKind::RhoPartition: return rho_partition(g, *p, *spec.rho, rng);
    case MechanismKind::KPartitionBaseline: return k_partition_baseline(g, *spec.k, rng);
    case MechanismKind::TrivialPredicted: {
      std::vector<int> out = p->vertices;
      std::sort(out.begin(), out.end());
      return out;
    }
    case MechanismKind::Lottery: {
      const double u = rng.next_double();
      const MechanismSpec& chosen = u < rat_double(*spec.mix_weight) ? *spec.a : *spec.b;
      return execute_draw(chosen, g, p, rng);
    }
  }
  throw input_error("unknown mechanism kind");
}

}  // namespace impsel
