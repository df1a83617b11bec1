#pragma once

// Desk-scale sweeps over n. Every table carries a schema tag and is emitted
// in n-ascending order; hard assertions are limited to the proven
// inequalities (dominance, quotient <= 1, c_required <= 1/2).

#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tvd/bounds.hpp"
#include "tvd/exact_engine.hpp"
#include "tvd/two_point.hpp"

namespace tvd {

struct Table {
  std::string schema;  // "<name>/v1"
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  std::vector<std::pair<std::string, std::string>> metadata;

  std::size_t column(std::string_view name) const;
  double at(std::size_t row, std::string_view name) const { return rows[row][column(name)]; }

  /// "# schema=..." and "# key=value" lines, then the header row and data.
  /// Doubles are printed shortest-round-trip, NaN as "nan".
  std::string to_csv() const;
  std::string to_json() const;
};

inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

/// Rows (n, distance, linear, lemma1 bounds, ratios, dominance) for
/// n = 1..n_max. Two-point pairs use the O(n^2) engine, others type classes.
template <Field F>
Table growth_sweep(const Distribution<F>& p, const Distribution<F>& q, unsigned n_max,
                   const EngineLimits& limits = {}) {
  if (n_max == 0) fail(Errc::InvalidArgument, "n_max must be at least 1");
  Table t;
  t.schema = "growth_sweep/v1";
  t.columns = {"n", "distance", "linear", "linear_capped", "lemma1_first", "lemma1_second",
               "ratio_linear", "ratio_first", "ratio_second", "dominance"};
  const auto pair = align(p, q);
  const auto profile = diff_profile(pair);
  const F delta = variational_distance<F>(pair.p, pair.q);
  const double delta_up = to_double_up(delta);
  const bool two_point = profile.diff_index.size() == 2;
  const bool gated = profile.pbar_positive();
  const double pbar = gated ? to_double_down(*profile.min_diff_prob) : 0.0;
  t.metadata = {{"backend", backend_name(backend_of_v<F>)},
                {"engine", profile.empty() ? "none" : (two_point ? "twopoint" : "types")},
                {"delta_1", to_string(delta)},
                {"pbar", profile.min_diff_prob ? to_string(*profile.min_diff_prob) : "none"}};
  std::optional<TwoPointView<F>> view;
  if (two_point) view = two_point_view(pair);

  for (unsigned n = 1; n <= n_max; ++n) {
    F dist = 0;
    if (view) {
      dist = two_point_block_distance<F>(view->mass, view->x_from, view->x_to, n);
    } else if (!profile.empty()) {
      dist = type_class_distance(ProductQuery<F>(p, q, n), limits);
    }
    const double d = to_double(dist);
    const LinearBound lin = linear_bound(delta_up, n);
    const double raw_linear = n * to_double(delta);
    double first = kNaN, second = kNaN;
    bool dominated = dist <= F(lin.value);
    if (gated) {
      first = lemma1_first_bound(delta_up, pbar, n);
      second = lemma1_second_bound(delta_up, pbar, n);
      dominated = dominated && dist <= F(first) && dist <= F(second);
    }
    auto ratio = [&](double bound) { return bound > 0 ? d / bound : kNaN; };
    t.rows.push_back({static_cast<double>(n), d, lin.value, lin.capped ? 1.0 : 0.0, first, second,
                      ratio(raw_linear), ratio(first), ratio(second), dominated ? 1.0 : 0.0});
  }
  return t;
}

/// A pair differing only at z1, z2 with min probability exactly pbar on the
/// difference set and delta(P,Q) = delta:
///   P = (pbar + delta, pbar, rest),  Q = (pbar, pbar + delta, rest)
/// delta is shrunk to 1 - 2 pbar when the mass does not fit; pbar = 1/2
/// leaves no room and throws InvalidArgument.
std::pair<Distribution<double>, Distribution<double>> make_two_point_pair(double pbar, double delta);

/// Quotient delta(P^n,Q^n) / lemma1_first_bound for n = 1..n_max on the pair
/// above, with its running maximum and a regime flag (distance < 0.1).
Table tightness_probe(double pbar, unsigned n_max, double delta = 1e-3);

/// c_required(n) = pbar (delta(P^n,Q^n)/delta)^2 / n over a grid of
/// (pbar, delta) two-point configurations, n = 1..n_max.
Table constant_probe(unsigned n_max);

/// Regime filter of the tightness probe.
inline constexpr double kTightnessRegime = 0.1;

struct PathIntegral {
  double distance = 0;    // delta(P_b^n, P_a^n), rounded up
  double integral = 0;    // upper Riemann sum of lemma2_first_bound along the path
  double lemma1_rhs = 0;  // (b - a) / sqrt(2 pi) * sqrt(2/pbar) * sqrt(n + 1/pbar)
  double pbar = 0;        // min of P_t(z1), P_t(z2) at the endpoints
  unsigned cells = 0;
  bool holds() const { return distance <= integral && distance <= lemma1_rhs; }
};

namespace detail {
PathIntegral path_integral_upper_sum(double mass, double x_a, double x_b, unsigned n, unsigned grid);
}

/// The derivative bound f(t) = lemma2_first_bound(P_t(z1), P_t(z2), n) is
/// decreasing up to P_t(z1) = mass/2 and increasing after, so on each cell
/// its supremum sits at an endpoint; the midpoint is added as a grid node.
/// Both endpoints must keep P_t(z1), P_t(z2) > 0.
template <Field F>
PathIntegral path_integral_check(const TwoPointFamily<F>& family, const F& t_from, const F& t_to, unsigned n,
                                 unsigned grid) {
  if (n == 0) fail(Errc::InvalidArgument, "n must be at least 1");
  if (grid < 2) fail(Errc::InvalidArgument, "grid must be at least 2");
  if (!family.contains(t_from) || !family.contains(t_to)) fail(Errc::OutOfRange, "parameter leaves the family's range");
  if (t_from == t_to) return {};
  const F& a = t_from < t_to ? t_from : t_to;
  const F& b = t_from < t_to ? t_to : t_from;
  const F xa = family.prob_z1(a), xb = family.prob_z1(b);
  const F mass = family.mass();
  if (!(xa > 0) || !(xb < mass)) fail(Errc::OutOfRange, "path must keep both block probabilities positive");
  PathIntegral out = detail::path_integral_upper_sum(to_double(mass), to_double(xa), to_double(xb), n, grid);
  out.distance = to_double_up(two_point_block_distance<F>(mass, xa, xb, n));
  return out;
}

}  // namespace tvd
