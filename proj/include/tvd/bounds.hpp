#pragma once

// Closed-form upper bounds on delta(P^n, Q^n) and the auxiliary inequalities
// their proofs rely on. Every bound is evaluated in long double and rounded
// up (round_up, +4 ulp), so "exact <= bound" comparisons cannot fail from
// rounding on the right-hand side.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tvd/distribution.hpp"
#include "tvd/exact_engine.hpp"

namespace tvd {

struct LinearBound {
  double value;  // min(1, n * delta)
  bool capped;   // n * delta exceeded 1
};

/// n * delta(P,Q), capped at 1 with a flag.
LinearBound linear_bound(double delta, unsigned n);

/// sqrt(1/(pi pbar)) * sqrt(n + 1/pbar) * delta. Throws PbarNotPositive.
double lemma1_first_bound(double delta, double pbar, unsigned n);

/// sqrt(n/(2 pbar)) * delta. Throws PbarNotPositive.
double lemma1_second_bound(double delta, double pbar, unsigned n);

/// Right-derivative bounds for a two-point family with masses p, p' at t0:
///   first:  1/sqrt(2 pi) * sqrt(1/p + 1/p') * sqrt(n + 1/min(p,p'))
///   second: 1/2 * sqrt(1/p + 1/p') * sqrt(n)
/// Both throw NonpositiveMass unless p, p' > 0, and InvalidArgument if
/// p + p' > 1.
double lemma2_first_bound(double p, double p_prime, unsigned n);
double lemma2_second_bound(double p, double p_prime, unsigned n);

/// Per-k majorants of the inner derivative sum, with alpha = p/(p+p') and
/// beta = p'/(p+p'). k is real so they can be evaluated at the mean n(p+p').
///   s(k)  = 1/(p+p') * sqrt((k + 1/min(alpha,beta)) / (2 pi alpha beta))
///   s~(k) = 1/(p+p') * sqrt(k / (4 alpha beta))
double s_k(double p, double p_prime, double k);
double s_tilde_k(double p, double p_prime, double k);

struct StirlingCheck {
  double lhs;  // C(n,k) (k/n)^k ((n-k)/n)^(n-k), nearest double
  double rhs;  // sqrt(n / (2 pi k (n-k))), rounded up
  bool holds;  // decided exactly against the big-integer lhs
};

/// Binomial-coefficient bound from Stirling's formula, for 0 < k < n.
/// Throws OutOfRange otherwise (at k = n the right-hand side is undefined).
StirlingCheck stirling_binom_check(unsigned n, unsigned k);

/// Exact scan of the binomial bound. Caches k^k for k <= n_max so that each
/// (n, k) costs two big-integer products.
class StirlingVerifier {
 public:
  explicit StirlingVerifier(unsigned n_max);

  bool holds(unsigned n, unsigned k) const;

  struct ScanResult {
    std::uint64_t checked = 0;
    std::uint64_t violations = 0;
  };
  /// Every 0 < k < n for one n.
  ScanResult scan(unsigned n) const;

 private:
  bool compare(const BigInt& lhs_numerator, unsigned n, unsigned k) const;

  unsigned n_max_;
  std::vector<BigInt> self_powers_;  // k^k
};

/// x^k (1-x)^(n-k) <= (k/n)^k (1-k/n)^(n-k), with 0^0 = 1. Compared in the
/// log domain with 1e-12 relative slack for the equality case x = k/n.
/// Domain: n > 0, 0 <= k <= n, 0 <= x <= 1, else OutOfRange.
bool maxpot_check(double n, double k, double x);

/// Sign test for the derivative of x^k (1-x)^(n-k): returns whether the
/// central finite difference of its logarithm (step h) is >= 0 exactly when
/// x <= k/n. Defined on the open interval 0 < x < 1 (OutOfRange otherwise).
bool derpot_sign_check(double n, double k, double x, double h = 1e-7);

/// All closed-form bounds for one (P, Q, n) query.
struct BoundReport {
  unsigned n = 1;
  std::string backend;
  double delta_1 = 0;  // rounded up
  std::string delta_1_exact;
  std::vector<std::string> diff_set;
  std::optional<double> pbar;  // rounded down
  std::optional<std::string> pbar_exact;
  LinearBound linear{0, false};
  std::optional<double> lemma1_first;
  std::optional<double> lemma1_second;
  bool lemma1_applicable = false;  // pbar > 0
  std::optional<double> distance;  // delta(P^n, Q^n), rounded up
  std::optional<std::string> distance_exact;
  std::optional<Engine> engine;
};

/// True when the reported distance (if any) is below every applicable bound.
bool dominance_holds(const BoundReport& report);

/// Builds the report. delta and pbar enter the bound formulas with directed
/// rounding (delta up, pbar down). The product distance is computed when
/// `with_distance` is set and the exact engines fit within `limits`.
template <Field F>
BoundReport bound_report(const Distribution<F>& p, const Distribution<F>& q, unsigned n,
                         const EngineLimits& limits = {}, bool with_distance = true) {
  if (n == 0) fail(Errc::InvalidArgument, "n must be at least 1");
  BoundReport r;
  r.n = n;
  r.backend = backend_name(backend_of_v<F>);
  const auto pair = align(p, q);
  const F delta = variational_distance<F>(pair.p, pair.q);
  r.delta_1 = to_double_up(delta);
  r.delta_1_exact = to_string(delta);
  const auto profile = diff_profile(pair);
  r.diff_set = profile.diff_set;
  r.linear = linear_bound(r.delta_1, n);
  if (profile.min_diff_prob) {
    r.pbar = to_double_down(*profile.min_diff_prob);
    r.pbar_exact = to_string(*profile.min_diff_prob);
  }
  r.lemma1_applicable = profile.pbar_positive() && *r.pbar > 0;
  if (r.lemma1_applicable) {
    r.lemma1_first = lemma1_first_bound(r.delta_1, *r.pbar, n);
    r.lemma1_second = lemma1_second_bound(r.delta_1, *r.pbar, n);
  }
  if (with_distance) {
    try {
      const auto d = product_distance(ProductQuery<F>(p, q, n), Engine::Auto, limits);
      r.distance = to_double_up(d.value);
      r.distance_exact = to_string(d.value);
      r.engine = d.engine;
    } catch (const Error& e) {
      if (e.code() != Errc::TooLarge) throw;
    }
  }
  return r;
}

}  // namespace tvd
