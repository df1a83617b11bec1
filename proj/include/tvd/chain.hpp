#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tvd/bounds.hpp"
#include "tvd/distribution.hpp"
#include "tvd/exact_engine.hpp"

namespace tvd {

/// P = P_1, ..., P_m = Q with consecutive members differing at exactly two
/// labels of the difference set. All members live on the merged alphabet.
template <Field F>
struct ChainDecomposition {
  std::vector<Distribution<F>> steps;
  std::vector<std::pair<std::string, std::string>> step_pairs;  // (surplus label, deficit label)
  std::vector<F> step_distances;

  std::size_t length() const { return steps.size(); }
};

/// Greedy monotone transport: while the current distribution C differs from
/// Q, move min(C(z+) - Q(z+), Q(z-) - C(z-)) from the first label with a
/// surplus to the first label with a deficit (alphabet order). Every
/// coordinate moves monotonically from P(z) to Q(z), so intermediate values
/// stay in [min(P(z),Q(z)), max(P(z),Q(z))], the step distances add up to
/// delta(P,Q), and each step fixes at least one coordinate (m <= |D|).
template <Field F>
ChainDecomposition<F> two_point_chain(const Distribution<F>& p, const Distribution<F>& q) {
  const auto pair = align(p, q);
  ChainDecomposition<F> out;
  std::vector<F> cur = pair.p;
  out.steps.emplace_back(pair.labels, cur);
  const std::size_t m = pair.size();
  for (;;) {
    std::size_t surplus = m, deficit = m;
    for (std::size_t i = 0; i < m && (surplus == m || deficit == m); ++i) {
      if (probs_equal<F>(cur[i], pair.q[i])) continue;
      if (cur[i] > pair.q[i] && surplus == m) surplus = i;
      if (cur[i] < pair.q[i] && deficit == m) deficit = i;
    }
    if (surplus == m || deficit == m) break;
    const F excess = cur[surplus] - pair.q[surplus];
    const F missing = pair.q[deficit] - cur[deficit];
    F moved;
    if (excess < missing) {
      moved = excess;
      cur[surplus] = pair.q[surplus];
      cur[deficit] += moved;
    } else if (missing < excess) {
      moved = missing;
      cur[deficit] = pair.q[deficit];
      cur[surplus] -= moved;
    } else {
      moved = excess;
      cur[surplus] = pair.q[surplus];
      cur[deficit] = pair.q[deficit];
    }
    out.steps.emplace_back(pair.labels, cur);
    out.step_pairs.emplace_back(pair.labels[surplus], pair.labels[deficit]);
    out.step_distances.push_back(moved);
  }
  if constexpr (!is_exact_v<F>) {
    // Leftover rounding below the equality tolerance: pin the end to Q.
    if (out.steps.size() > 1) out.steps.back() = Distribution<F>(pair.labels, pair.q);
  }
  return out;
}

struct ChainInvariants {
  bool endpoints = false;         // first step is P, last is Q
  bool two_point_steps = false;   // neighbours differ at exactly two labels, both in D
  bool pbar_floor = false;        // P_i(z) >= pbar for z in D
  bool additive = false;          // step distances sum to delta(P,Q)
  bool length_within_diff = false;  // m <= |D| (m = 1 for P = Q)
  bool all() const { return endpoints && two_point_steps && pbar_floor && additive && length_within_diff; }
};

template <Field F>
ChainInvariants check_chain(const ChainDecomposition<F>& chain, const Distribution<F>& p, const Distribution<F>& q) {
  ChainInvariants out;
  const auto pair = align(p, q);
  const auto profile = diff_profile(pair);
  if (chain.steps.empty()) return out;
  auto same = [&](const Distribution<F>& d, const std::vector<F>& v) {
    if (d.labels() != pair.labels) return false;
    for (std::size_t i = 0; i < v.size(); ++i)
      if (!probs_equal<F>(d[i], v[i])) return false;
    return true;
  };
  out.endpoints = same(chain.steps.front(), pair.p) && same(chain.steps.back(), pair.q);

  std::vector<bool> in_diff(pair.size(), false);
  for (auto i : profile.diff_index) in_diff[i] = true;
  out.two_point_steps = chain.step_distances.size() + 1 == chain.steps.size();
  for (std::size_t s = 0; s + 1 < chain.steps.size(); ++s) {
    std::size_t changed = 0;
    for (std::size_t i = 0; i < pair.size(); ++i) {
      if (probs_equal<F>(chain.steps[s][i], chain.steps[s + 1][i])) continue;
      ++changed;
      if (!in_diff[i]) out.two_point_steps = false;
    }
    if (changed != 2) out.two_point_steps = false;
    const F d = variational_distance<F>(chain.steps[s].probs(), chain.steps[s + 1].probs());
    if (!probs_equal<F>(d, chain.step_distances[s]) || !(d > 0)) out.two_point_steps = false;
  }

  out.pbar_floor = true;
  if (profile.min_diff_prob) {
    for (const auto& step : chain.steps)
      for (auto i : profile.diff_index)
        if (step[i] < *profile.min_diff_prob) out.pbar_floor = false;
  }

  F sum = 0;
  for (const auto& d : chain.step_distances) sum += d;
  const F delta = variational_distance<F>(pair.p, pair.q);
  if constexpr (is_exact_v<F>) {
    out.additive = sum == delta;
  } else {
    out.additive = std::fabs(sum - delta) <= 1e-12;
  }
  out.length_within_diff = chain.length() <= std::max<std::size_t>(1, profile.diff_set.size());
  return out;
}

/// The proof's assembly step: per-step bounds add up to the global bound, and
/// delta(P^n,Q^n) <= sum_i delta(P_i^n, P_{i+1}^n) where the engines fit.
template <Field F>
struct ChainAssembly {
  ChainDecomposition<F> chain;
  BoundReport report;
  std::vector<double> step_first_bounds;
  std::vector<double> step_second_bounds;
  double step_first_sum = 0;
  double step_second_sum = 0;
  F step_distance_sum;
  bool additive = false;  // sum_i delta(P_i, P_{i+1}) == delta(P, Q)
  bool bound_sum_matches = true;  // per-step bounds add up to the global ones (up to rounding)
  std::optional<F> product_distance;
  std::optional<F> product_step_sum;
  bool triangle_holds = true;
};

template <Field F>
ChainAssembly<F> chain_bound_assembly(const Distribution<F>& p, const Distribution<F>& q, unsigned n,
                                      const EngineLimits& limits = {}) {
  ChainAssembly<F> out;
  out.report = bound_report(p, q, n, limits, /*with_distance=*/false);
  if (!out.report.diff_set.empty() && !out.report.lemma1_applicable)
    fail(Errc::PbarNotPositive, "pbar = 0: the chain bound does not apply");
  out.chain = two_point_chain(p, q);

  const F delta = variational_distance(p, q);
  out.step_distance_sum = 0;
  for (const auto& d : out.chain.step_distances) out.step_distance_sum += d;
  if constexpr (is_exact_v<F>) {
    out.additive = out.step_distance_sum == delta;
  } else {
    out.additive = std::fabs(out.step_distance_sum - delta) <= 1e-12;
  }

  if (out.report.lemma1_applicable) {
    for (const auto& d : out.chain.step_distances) {
      const double du = to_double_up(d);
      out.step_first_bounds.push_back(lemma1_first_bound(du, *out.report.pbar, n));
      out.step_second_bounds.push_back(lemma1_second_bound(du, *out.report.pbar, n));
      out.step_first_sum += out.step_first_bounds.back();
      out.step_second_sum += out.step_second_bounds.back();
    }
    if (!out.chain.step_distances.empty()) {
      auto close = [](double sum, double global) { return std::fabs(sum - global) <= 1e-12 * std::max(global, 1e-300); };
      out.bound_sum_matches = close(out.step_first_sum, *out.report.lemma1_first) &&
                              close(out.step_second_sum, *out.report.lemma1_second);
    }
  }

  try {
    const F total = type_class_distance(ProductQuery<F>(p, q, n), limits);
    F steps = 0;
    for (std::size_t i = 0; i + 1 < out.chain.steps.size(); ++i)
      steps += two_point_distance(ProductQuery<F>(out.chain.steps[i], out.chain.steps[i + 1], n));
    out.product_distance = total;
    out.product_step_sum = steps;
    if constexpr (is_exact_v<F>) {
      out.triangle_holds = total <= steps;
    } else {
      out.triangle_holds = total <= steps + 1e-12;
    }
  } catch (const Error& e) {
    if (e.code() != Errc::TooLarge) throw;
  }
  return out;
}

}  // namespace tvd
