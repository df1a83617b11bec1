#include "tvd/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace tvd {

namespace {

constexpr long double kPi = std::numbers::pi_v<long double>;

void require_unit_interval(double delta) {
  if (!(delta >= 0.0 && delta <= 1.0)) fail(Errc::OutOfRange, "delta must lie in [0, 1]");
}

void require_pbar(double pbar) {
  if (!(pbar > 0.0)) fail(Errc::PbarNotPositive, "pbar = " + to_string(pbar) + " is not positive; bound inapplicable");
}

void require_masses(double p, double p_prime) {
  if (!(p > 0.0) || !(p_prime > 0.0)) fail(Errc::NonpositiveMass, "p and p' must be positive");
  if (p + p_prime > 1.0 + kSumTolerance) fail(Errc::InvalidArgument, "p + p' exceeds 1");
}

void require_n(unsigned n) {
  if (n == 0) fail(Errc::InvalidArgument, "n must be at least 1");
}

}  // namespace

LinearBound linear_bound(double delta, unsigned n) {
  require_unit_interval(delta);
  require_n(n);
  const long double raw = static_cast<long double>(n) * delta;
  if (raw > 1.0L) return {1.0, true};
  return {std::min(1.0, round_up(raw)), false};
}

double lemma1_first_bound(double delta, double pbar, unsigned n) {
  require_unit_interval(delta);
  require_pbar(pbar);
  require_n(n);
  const long double pb = pbar;
  return round_up(std::sqrt(1.0L / (kPi * pb)) * std::sqrt(n + 1.0L / pb) * delta);
}

double lemma1_second_bound(double delta, double pbar, unsigned n) {
  require_unit_interval(delta);
  require_pbar(pbar);
  require_n(n);
  return round_up(std::sqrt(static_cast<long double>(n) / (2.0L * pbar)) * delta);
}

double lemma2_first_bound(double p, double p_prime, unsigned n) {
  require_masses(p, p_prime);
  require_n(n);
  const long double a = p, b = p_prime;
  return round_up(1.0L / std::sqrt(2.0L * kPi) * std::sqrt(1.0L / a + 1.0L / b) *
                  std::sqrt(n + 1.0L / std::min(a, b)));
}

double lemma2_second_bound(double p, double p_prime, unsigned n) {
  require_masses(p, p_prime);
  require_n(n);
  const long double a = p, b = p_prime;
  return round_up(0.5L * std::sqrt(1.0L / a + 1.0L / b) * std::sqrt(static_cast<long double>(n)));
}

double s_k(double p, double p_prime, double k) {
  require_masses(p, p_prime);
  if (!(k >= 0.0)) fail(Errc::OutOfRange, "k must be nonnegative");
  const long double mass = static_cast<long double>(p) + p_prime;
  const long double alpha = p / mass, beta = p_prime / mass;
  return round_up(1.0L / mass *
                  std::sqrt((k + 1.0L / std::min(alpha, beta)) / (2.0L * kPi * alpha * beta)));
}

double s_tilde_k(double p, double p_prime, double k) {
  require_masses(p, p_prime);
  if (!(k >= 0.0)) fail(Errc::OutOfRange, "k must be nonnegative");
  const long double mass = static_cast<long double>(p) + p_prime;
  const long double alpha = p / mass, beta = p_prime / mass;
  return round_up(1.0L / mass * std::sqrt(k / (4.0L * alpha * beta)));
}

// ---------------------------------------------------------------------------

namespace {

void require_stirling_range(unsigned n, unsigned k) {
  if (k == 0 || k >= n) fail(Errc::OutOfRange, "binomial bound needs 0 < k < n");
}

double stirling_rhs(unsigned n, unsigned k) {
  const long double kn = static_cast<long double>(k) * (n - k);
  return round_up(std::sqrt(static_cast<long double>(n) / (2.0L * kPi * kn)));
}

BigInt self_power(unsigned k) {
  BigInt out;
  mpz_ui_pow_ui(out.get_mpz_t(), k, k);
  return out;
}

// lhs_numerator / n^n <= rhs, where rhs = mantissa * 2^exponent exactly.
bool compare_scaled(const BigInt& lhs_numerator, const BigInt& n_pow_n, double rhs) {
  int exponent = 0;
  const double frac = std::frexp(rhs, &exponent);
  const BigInt mantissa(std::ldexp(frac, 53));
  exponent -= 53;
  BigInt left = lhs_numerator, right = mantissa * n_pow_n;
  if (exponent < 0) {
    mpz_mul_2exp(left.get_mpz_t(), left.get_mpz_t(), static_cast<mp_bitcnt_t>(-exponent));
  } else {
    mpz_mul_2exp(right.get_mpz_t(), right.get_mpz_t(), static_cast<mp_bitcnt_t>(exponent));
  }
  return left <= right;
}

}  // namespace

StirlingCheck stirling_binom_check(unsigned n, unsigned k) {
  require_stirling_range(n, k);
  const BigInt numerator = binomial(n, k) * self_power(k) * self_power(n - k);
  const BigInt denominator = self_power(n);
  StirlingCheck out;
  out.rhs = stirling_rhs(n, k);
  out.lhs = Rational(numerator, denominator).get_d();
  out.holds = compare_scaled(numerator, denominator, out.rhs);
  return out;
}

StirlingVerifier::StirlingVerifier(unsigned n_max) : n_max_(n_max), self_powers_(n_max + 1) {
  self_powers_[0] = 1;
  for (unsigned k = 1; k <= n_max; ++k) self_powers_[k] = self_power(k);
}

bool StirlingVerifier::compare(const BigInt& lhs_numerator, unsigned n, unsigned k) const {
  return compare_scaled(lhs_numerator, self_powers_[n], stirling_rhs(n, k));
}

bool StirlingVerifier::holds(unsigned n, unsigned k) const {
  require_stirling_range(n, k);
  if (n > n_max_) fail(Errc::OutOfRange, "n exceeds the verifier's cache");
  return compare(binomial(n, k) * self_powers_[k] * self_powers_[n - k], n, k);
}

StirlingVerifier::ScanResult StirlingVerifier::scan(unsigned n) const {
  if (n > n_max_) fail(Errc::OutOfRange, "n exceeds the verifier's cache");
  ScanResult out;
  BigInt choose = 1, numerator;
  // lhs and rhs are both symmetric under k -> n - k.
  for (unsigned k = 1; 2 * k <= n; ++k) {
    choose *= (n - k + 1);
    mpz_divexact_ui(choose.get_mpz_t(), choose.get_mpz_t(), k);
    numerator = choose * self_powers_[k];
    numerator *= self_powers_[n - k];
    const bool ok = compare(numerator, n, k);
    const std::uint64_t weight = (2 * k == n) ? 1 : 2;
    out.checked += weight;
    if (!ok) out.violations += weight;
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

void require_pot_domain(double n, double k, double x) {
  if (!(n > 0) || !(k >= 0) || !(k <= n) || !(x >= 0) || !(x <= 1))
    fail(Errc::OutOfRange, "need n > 0, 0 <= k <= n, 0 <= x <= 1");
}

long double log_pot(long double n, long double k, long double x) {
  auto term = [](long double e, long double base) -> long double {
    if (e == 0) return 0.0L;
    if (base == 0) return -std::numeric_limits<long double>::infinity();
    return e * std::log(base);
  };
  return term(k, x) + term(n - k, 1.0L - x);
}

}  // namespace

bool maxpot_check(double n, double k, double x) {
  require_pot_domain(n, k, x);
  const long double lhs = log_pot(n, k, x);
  const long double rhs = log_pot(n, k, static_cast<long double>(k) / n);
  if (lhs == -std::numeric_limits<long double>::infinity()) return true;
  return lhs <= rhs + 1e-12L * std::max(1.0L, std::fabs(rhs));
}

bool derpot_sign_check(double n, double k, double x, double h) {
  require_pot_domain(n, k, x);
  if (!(x > 0 && x < 1)) fail(Errc::OutOfRange, "sign test needs 0 < x < 1");
  if (!(h > 0)) fail(Errc::InvalidArgument, "step must be positive");
  h = std::min(h, 0.5 * std::min(x, 1.0 - x));
  const long double slope = (log_pot(n, k, x + h) - log_pot(n, k, x - h)) / (2.0L * h);
  const bool nonnegative = slope >= -1e-9L;  // x = k/n is a stationary point
  return nonnegative == (x <= k / n);
}

// ---------------------------------------------------------------------------

bool dominance_holds(const BoundReport& report) {
  if (!report.distance) return true;
  const double d = *report.distance;
  if (d > report.linear.value) return false;
  if (report.lemma1_first && d > *report.lemma1_first) return false;
  if (report.lemma1_second && d > *report.lemma1_second) return false;
  return true;
}

}  // namespace tvd
