#include "tvd/derivative.hpp"

#include <numbers>

namespace tvd {

namespace {

long double as_long_double(const Rational& x) { return static_cast<long double>(x.get_d()); }

}  // namespace

BinomChainLinks binom_chain_links(unsigned k, const Rational& alpha) {
  if (k == 0) fail(Errc::OutOfRange, "the bound chain needs k >= 1");
  if (!(alpha > 0) || !(alpha < 1)) fail(Errc::OutOfRange, "alpha must lie in (0, 1)");
  const long double pi = std::numbers::pi_v<long double>;

  BinomChainLinks c;
  c.k = k;
  c.alpha = alpha;
  c.beta = 1 - alpha;
  c.rbar = rbar<Rational>(k, alpha, c.beta);
  const unsigned rb = c.rbar;
  c.alpha_tilde = Rational(rb + 1, k + 1);
  c.beta_tilde = Rational(k - rb, k + 1);
  c.alpha_tilde.canonicalize();
  c.beta_tilde.canonicalize();
  c.gamma = Rational(k) * alpha - Rational(rb);

  const Rational ab = c.alpha * c.beta;
  Rational factor(BigInt(rb + 1) * BigInt(k - rb), BigInt(k) * BigInt(k + 1));
  factor.canonicalize();
  const Rational outer = Rational(binomial(k + 1, rb + 1)) * factor / ab;

  c.term = Rational(binomial(k - 1, rb)) * pow_int(c.alpha, rb) * pow_int(c.beta, k - rb - 1);
  c.rewritten = outer * pow_int(c.alpha, rb + 1) * pow_int(c.beta, k - rb);
  c.maxpot_bound = outer * pow_int(c.alpha_tilde, rb + 1) * pow_int(c.beta_tilde, k - rb);

  const long double a = as_long_double(c.alpha), b = as_long_double(c.beta);
  const long double at = as_long_double(c.alpha_tilde), bt = as_long_double(c.beta_tilde);
  const long double kk = k;
  c.stirling_bound = round_up(std::sqrt(1.0L / (2.0L * pi * (kk + 1) * at * bt)) *
                              ((rb + 1.0L) * (kk - rb)) / (kk * (kk + 1) * a * b));
  c.final_form = round_up(1.0L / kk * std::sqrt((kk + 1) / (2.0L * pi * a * b)) * std::sqrt(at * bt / (a * b)));

  c.ratio = c.alpha_tilde * c.beta_tilde / ab;
  const Rational& lo = c.alpha < c.beta ? c.alpha : c.beta;
  c.ratio_bound = (Rational(k) + 1 / lo) / Rational(k + 1);
  c.gamma_predicate = !((1 - c.gamma) / c.alpha > 1 && c.gamma / c.beta > 1);
  return c;
}

PerKBounds per_k_bounds(unsigned k, const Rational& p, const Rational& p_prime) {
  PerKBounds out;
  out.inner_sum = inner_sum_closed<Rational>(k, p, p_prime);
  // Conversion error of the masses (<= 1/2 ulp) stays inside the 4 ulp slack.
  const double pd = to_double(p), ppd = to_double(p_prime);
  out.s = s_k(pd, ppd, k);
  out.s_tilde = s_tilde_k(pd, ppd, k);
  return out;
}

}  // namespace tvd
