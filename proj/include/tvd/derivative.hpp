#pragma once

// Right derivative of t -> delta(P_t^n, P_{t0}^n) for a two-point family,
// and the intermediate quantities of its upper bound.
//
// With alpha = p/(p+p'), beta = p'/(p+p') and q(k) the binomial probability
// that k of the n coordinates land in {z1, z2}:
//
//   d/dt delta = sum_k q(k) sum_{r <= rbar} C(k,r) a'_{k,r}(0),  rbar = floor(k alpha)
//   a'_{k,r}(0) = ((k-r) alpha^r beta^(k-r-1) - r alpha^(r-1) beta^(k-r)) / (p+p')
//   sum_{r <= rbar} C(k,r) a'_{k,r}(0) = k/(p+p') C(k-1, rbar) alpha^rbar beta^(k-rbar-1)
//
// The last line turns the O(n^2) double sum into an O(n) one.

#include <cmath>
#include <numbers>
#include <vector>

#include "tvd/bounds.hpp"
#include "tvd/exact_engine.hpp"
#include "tvd/log_math.hpp"
#include "tvd/two_point.hpp"

namespace tvd {

/// floor(k p / (p + p')), exact in the rational field.
template <Field F>
unsigned rbar(unsigned k, const F& p, const F& p_prime) {
  if constexpr (is_exact_v<F>) {
    const Rational x = Rational(k) * p / (p + p_prime);
    BigInt fl;
    mpz_fdiv_q(fl.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
    return static_cast<unsigned>(fl.get_ui());
  } else {
    return static_cast<unsigned>(std::floor(k * (p / (p + p_prime))));
  }
}

namespace detail {

template <Field F>
void require_positive_masses(const F& p, const F& p_prime) {
  if (!(p > 0) || !(p_prime > 0)) fail(Errc::NonpositiveMass, "p and p' must be positive");
}

// alpha = a/b, beta = c/b with integers, for the exact inner sums.
struct IntegerAlpha {
  BigInt a, b, c;
  explicit IntegerAlpha(const Rational& alpha) : a(alpha.get_num()), b(alpha.get_den()), c(b - a) {}
};

}  // namespace detail

/// Derivative at t = t0 of the r-th term a_{k,r}(t), with 0^0 = 1 and the
/// r = 0 / r = k boundary terms that carry a vanishing factor taken as 0.
template <Field F>
F a_prime(unsigned k, unsigned r, const F& p, const F& p_prime) {
  detail::require_positive_masses(p, p_prime);
  if (r > k) fail(Errc::OutOfRange, "a'_{k,r} needs r <= k");
  const F mass = p + p_prime;
  const F alpha = p / mass, beta = p_prime / mass;
  F out = 0;
  if (r < k) out += F(k - r) * pow_int(alpha, r) * pow_int(beta, k - r - 1);
  if (r > 0) out -= F(r) * pow_int(alpha, r - 1) * pow_int(beta, k - r);
  return F(out / mass);
}

/// sum_{r <= rbar} C(k,r) a'_{k,r}(0), summed term by term.
template <Field F>
F inner_sum_direct(unsigned k, const F& p, const F& p_prime) {
  detail::require_positive_masses(p, p_prime);
  if (k == 0) return F(0);
  const unsigned rb = rbar<F>(k, p, p_prime);
  const F mass = p + p_prime;
  if constexpr (is_exact_v<F>) {
    const detail::IntegerAlpha ia(Rational(p / mass));
    const auto pa = detail::powers(ia.a, k), pc = detail::powers(ia.c, k);
    BigInt sum = 0, choose = 1;
    for (unsigned r = 0; r <= rb; ++r) {
      if (r > 0) {
        choose *= (k - r + 1);
        mpz_divexact_ui(choose.get_mpz_t(), choose.get_mpz_t(), r);
      }
      BigInt term = 0;
      if (r < k) term += BigInt(k - r) * pa[r] * pc[k - r - 1];
      if (r > 0) term -= BigInt(r) * pa[r - 1] * pc[k - r];
      sum += choose * term;
    }
    BigInt den;
    mpz_pow_ui(den.get_mpz_t(), ia.b.get_mpz_t(), k - 1);
    Rational out(sum, den);
    out.canonicalize();
    return Rational(out / mass);
  } else {
    // C(k,r) a' = C(k,r) (k alpha - r) alpha^(r-1) beta^(k-r-1) / mass, and
    // k alpha - r >= 0 for r <= rbar, so every term is nonnegative.
    const double alpha = p / mass, beta = p_prime / mass;
    const double la = std::log(alpha), lb = std::log(beta);
    const LogFactorials lf(k);
    double sum = 0.0;
    for (unsigned r = 0; r <= rb; ++r) {
      const double lead = k * alpha - r;
      if (lead <= 0.0) continue;
      sum += std::exp(lf.log_binom(k, r) + std::log(lead) + (r - 1.0) * la + (k - r - 1.0) * lb);
    }
    return sum / mass;
  }
}

/// k/(p+p') * C(k-1, rbar) alpha^rbar beta^(k-rbar-1).
template <Field F>
F inner_sum_closed(unsigned k, const F& p, const F& p_prime) {
  detail::require_positive_masses(p, p_prime);
  if (k == 0) return F(0);
  const unsigned rb = rbar<F>(k, p, p_prime);
  const F mass = p + p_prime;
  if constexpr (is_exact_v<F>) {
    const detail::IntegerAlpha ia(Rational(p / mass));
    BigInt num = BigInt(k) * binomial(k - 1, rb), t;
    mpz_pow_ui(t.get_mpz_t(), ia.a.get_mpz_t(), rb);
    num *= t;
    mpz_pow_ui(t.get_mpz_t(), ia.c.get_mpz_t(), k - 1 - rb);
    num *= t;
    BigInt den;
    mpz_pow_ui(den.get_mpz_t(), ia.b.get_mpz_t(), k - 1);
    Rational out(num, den);
    out.canonicalize();
    return Rational(out / mass);
  } else {
    const double alpha = p / mass, beta = p_prime / mass;
    const double lc = std::lgamma(static_cast<double>(k)) - std::lgamma(rb + 1.0) - std::lgamma(static_cast<double>(k - rb));
    return std::exp(std::log(static_cast<double>(k)) + lc + xlogy(rb, std::log(alpha)) +
                    xlogy(k - 1 - rb, std::log(beta))) / mass;
  }
}

template <Field F>
struct InnerSumCheck {
  F sum;
  F closed;
};

/// Both sides of the inner-sum collapse. Equal exactly in the rational field
/// and within 1e-10 relative in float.
template <Field F>
InnerSumCheck<F> inner_sum_identity_check(unsigned k, const F& p, const F& p_prime) {
  if (k == 0) fail(Errc::OutOfRange, "inner-sum identity needs k >= 1");
  return {inner_sum_direct<F>(k, p, p_prime), inner_sum_closed<F>(k, p, p_prime)};
}

template <Field F>
struct DerivativeTerm {
  unsigned k = 0;
  F qk;
  unsigned rbar = 0;
  F inner_sum;
  F closed_form;
  F alpha_tilde;  // (rbar + 1)/(k + 1)
  F beta_tilde;   // (k - rbar)/(k + 1)
  F gamma;        // k alpha - floor(k alpha)
};

template <Field F>
struct DerivativeDecomposition {
  F alpha;
  F beta;
  std::vector<DerivativeTerm<F>> terms;  // k = 0..n
  F derivative;                          // sum_k qk * closed_form
};

namespace detail {

/// q(k) for k = 0..n.
template <Field F>
std::vector<F> binomial_weights(const F& mass, unsigned n) {
  std::vector<F> out(n + 1);
  if constexpr (is_exact_v<F>) {
    const Rational rest = 1 - mass;
    BigInt choose = 1;
    for (unsigned k = 0; k <= n; ++k) {
      if (k > 0) {
        choose *= (n - k + 1);
        mpz_divexact_ui(choose.get_mpz_t(), choose.get_mpz_t(), k);
      }
      out[k] = Rational(choose) * pow_int(mass, k) * pow_int(rest, n - k);
    }
  } else {
    const LogFactorials lf(n);
    const double lm = safe_log(mass), lr = safe_log(1.0 - mass);
    for (unsigned k = 0; k <= n; ++k) {
      const double l = lf.log_binom(n, k) + xlogy(k, lm) + xlogy(n - k, lr);
      out[k] = l < kLogUnderflow ? 0.0 : std::exp(l);
    }
  }
  return out;
}

}  // namespace detail

/// Full per-k breakdown. Evaluates the direct inner sums too, so it is
/// O(n^2); use derivative_exact for the value alone.
template <Field F>
DerivativeDecomposition<F> decompose_derivative(const TwoPointFamily<F>& family, unsigned n) {
  if (n == 0) fail(Errc::InvalidArgument, "n must be at least 1");
  const F& p = family.p();
  const F& pp = family.p_prime();
  const F mass = family.mass();
  DerivativeDecomposition<F> out;
  out.alpha = p / mass;
  out.beta = pp / mass;
  out.derivative = 0;
  const auto q = detail::binomial_weights<F>(mass, n);
  out.terms.reserve(n + 1);
  for (unsigned k = 0; k <= n; ++k) {
    DerivativeTerm<F> t;
    t.k = k;
    t.qk = q[k];
    t.rbar = rbar<F>(k, p, pp);
    t.inner_sum = inner_sum_direct<F>(k, p, pp);
    t.closed_form = inner_sum_closed<F>(k, p, pp);
    t.alpha_tilde = F(t.rbar + 1) / F(k + 1);
    t.beta_tilde = F(k - t.rbar) / F(k + 1);
    t.gamma = F(k) * out.alpha - F(t.rbar);
    out.derivative += t.qk * t.closed_form;
    out.terms.push_back(std::move(t));
  }
  return out;
}

/// Right derivative of delta(P_t^n, P_{t0}^n) at t0, O(n) via the closed form.
template <Field F>
F derivative_exact(const TwoPointFamily<F>& family, unsigned n) {
  if (n == 0) fail(Errc::InvalidArgument, "n must be at least 1");
  const F& p = family.p();
  const F& pp = family.p_prime();
  const F mass = family.mass();
  if constexpr (is_exact_v<F>) {
    const auto q = detail::binomial_weights<F>(mass, n);
    Rational total = 0;
    for (unsigned k = 1; k <= n; ++k)
      if (q[k] != 0) total += q[k] * inner_sum_closed<F>(k, p, pp);
    return total;
  } else {
    const LogFactorials lf(n);
    const double alpha = p / mass, beta = pp / mass;
    const double la = std::log(alpha), lb = std::log(beta);
    const double lm = std::log(mass), lr = safe_log(1.0 - mass);
    double total = 0.0;
    for (unsigned k = 1; k <= n; ++k) {
      const double lq = lf.log_binom(n, k) + xlogy(k, lm) + xlogy(n - k, lr);
      if (lq < kLogUnderflow) continue;
      const unsigned rb = rbar<double>(k, p, pp);
      const double lc = std::log(static_cast<double>(k)) - lm + lf.log_binom(k - 1, rb) + xlogy(rb, la) +
                        xlogy(k - 1 - rb, lb);
      total += std::exp(lq + lc);
    }
    return total;
  }
}

/// Same derivative from the O(n^2) double sum of a' terms (self-check).
template <Field F>
F derivative_direct(const TwoPointFamily<F>& family, unsigned n) {
  if (n == 0) fail(Errc::InvalidArgument, "n must be at least 1");
  const auto q = detail::binomial_weights<F>(family.mass(), n);
  F total = 0;
  for (unsigned k = 1; k <= n; ++k)
    if (q[k] != 0) total += q[k] * inner_sum_direct<F>(k, family.p(), family.p_prime());
  return total;
}

struct JensenCheck {
  double lhs;        // sum_k q(k) s(k)
  double rhs;        // s(n (p+p')), rounded up
  double lhs_tilde;  // sum_k q(k) s~(k)
  double rhs_tilde;  // s~(n (p+p')), rounded up
  bool holds() const { return lhs <= rhs && lhs_tilde <= rhs_tilde; }
};

/// Jensen step for the concave majorants s and s~ under the binomial q(k).
template <Field F>
JensenCheck jensen_step_check(const TwoPointFamily<F>& family, unsigned n) {
  if (n == 0) fail(Errc::InvalidArgument, "n must be at least 1");
  const double p = to_double(family.p()), pp = to_double(family.p_prime());
  const long double mass = static_cast<long double>(p) + pp;
  const long double alpha = p / mass, beta = pp / mass;
  const long double pi = std::numbers::pi_v<long double>;
  const auto q = detail::binomial_weights<double>(static_cast<double>(mass), n);
  long double lhs = 0, lhs_tilde = 0;
  for (unsigned k = 0; k <= n; ++k) {
    if (q[k] == 0.0) continue;
    lhs += q[k] * (1.0L / mass) * std::sqrt((k + 1.0L / std::min(alpha, beta)) / (2.0L * pi * alpha * beta));
    lhs_tilde += q[k] * (1.0L / mass) * std::sqrt(k / (4.0L * alpha * beta));
  }
  const double mean = static_cast<double>(n * mass);
  return {static_cast<double>(lhs), s_k(p, pp, mean), static_cast<double>(lhs_tilde), s_tilde_k(p, pp, mean)};
}

/// Per-k intermediate values of the binomial bound chain
///
///   C(k-1,rbar) a^rbar b^(k-rbar-1)
///     =  C(k+1,rbar+1) (rbar+1)(k-rbar)/(k(k+1)) a^(rbar+1) b^(k-rbar) / (a b)
///     <= same with a~ = (rbar+1)/(k+1), b~ = (k-rbar)/(k+1) in the powers
///     <= sqrt(1/(2 pi (k+1) a~ b~)) (rbar+1)(k-rbar)/(k(k+1) a b)
///     =  (1/k) sqrt((k+1)/(2 pi a b)) sqrt(a~ b~/(a b))
///
/// and a~ b~/(a b) <= (k + 1/min(a,b))/(k+1). Exact where no square root
/// or pi is involved.
struct BinomChainLinks {
  unsigned k = 0;
  unsigned rbar = 0;
  Rational alpha, beta, alpha_tilde, beta_tilde, gamma;
  Rational term;
  Rational rewritten;
  Rational maxpot_bound;
  double stirling_bound = 0;  // rounded up
  double final_form = 0;      // rounded up
  Rational ratio;
  Rational ratio_bound;
  bool gamma_predicate = false;  // (1-gamma)/alpha and gamma/beta are not both > 1

  bool rewrite_exact() const { return term == rewritten; }
  bool maxpot_link() const { return rewritten <= maxpot_bound; }
  bool stirling_link() const { return maxpot_bound <= Rational(stirling_bound); }
  bool final_link() const { return std::fabs(stirling_bound - final_form) <= 1e-12 * final_form; }
  bool ratio_link() const { return ratio <= ratio_bound; }
  bool all() const {
    return rewrite_exact() && maxpot_link() && stirling_link() && final_link() && ratio_link() && gamma_predicate;
  }
};

/// Requires k >= 1 and 0 < alpha < 1.
BinomChainLinks binom_chain_links(unsigned k, const Rational& alpha);

struct PerKBounds {
  Rational inner_sum;
  double s = 0;        // s(k), rounded up
  double s_tilde = 0;  // s~(k), rounded up
  bool below_s() const { return inner_sum <= Rational(s); }
  bool below_s_tilde() const { return inner_sum <= Rational(s_tilde); }
};

/// Exact inner sum against both per-k majorants.
PerKBounds per_k_bounds(unsigned k, const Rational& p, const Rational& p_prime);

}  // namespace tvd
