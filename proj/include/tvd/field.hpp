#pragma once

// Numeric fields the engines are generic over.
//
//   Rational  exact GMP rationals, never rounds (the ground truth)
//   double    IEEE binary64; long products are carried in the log domain

#include <gmpxx.h>

#include <cmath>
#include <concepts>
#include <limits>
#include <string>
#include <string_view>
#include <type_traits>

namespace tvd {

using Rational = mpq_class;
using BigInt = mpz_class;

template <class F>
concept Field = std::same_as<F, double> || std::same_as<F, Rational>;

template <class F>
inline constexpr bool is_exact_v = std::is_same_v<F, Rational>;

enum class Backend { Rational, Float };

template <Field F>
inline constexpr Backend backend_of_v = is_exact_v<F> ? Backend::Rational : Backend::Float;

const char* backend_name(Backend b) noexcept;
Backend parse_backend(std::string_view name);

// Tolerances of the float backend.
inline constexpr double kSumTolerance = 1e-12;
inline constexpr double kEqualityTolerance = 1e-15;

inline double to_double(double x) { return x; }
/// Round to nearest, ties to even.
double to_double(const Rational& x);

/// Smallest double >= x (resp. largest double <= x).
double to_double_up(const Rational& x);
double to_double_down(const Rational& x);
inline double to_double_up(double x) { return x; }
inline double to_double_down(double x) { return x; }

/// Converts an extended-precision evaluation to a double that is not below
/// it, then adds `slack_ulps` further ulps. Used by every bound formula.
double round_up(long double x, int slack_ulps = 4);

/// Exact conversion; a double is a dyadic rational.
inline Rational to_rational(double x) { return Rational(x); }

/// Accepts "3/10", decimal "0.3" / "-1.5e-3" and integers. Decimal input is
/// read exactly in the rational field ("0.1" is 1/10, not the binary double).
template <Field F>
F parse_number(std::string_view text);

template <>
Rational parse_number<Rational>(std::string_view text);
template <>
double parse_number<double>(std::string_view text);

/// Shortest round-trip decimal for doubles, "num/den" for rationals.
std::string to_string(double x);
std::string to_string(const Rational& x);

inline double abs_value(double x) { return std::fabs(x); }
inline Rational abs_value(const Rational& x) { return abs(x); }

/// Integer power with 0^0 = 1.
template <Field F>
F pow_int(const F& base, unsigned exponent) {
  if constexpr (is_exact_v<F>) {
    Rational out;
    mpz_pow_ui(out.get_num_mpz_t(), base.get_num_mpz_t(), exponent);
    mpz_pow_ui(out.get_den_mpz_t(), base.get_den_mpz_t(), exponent);
    // A power of a canonical fraction is canonical, but the sign lives in
    // the numerator only, so no canonicalize() is needed.
    return out;
  } else {
    if (exponent == 0) return 1.0;
    return std::pow(base, static_cast<double>(exponent));
  }
}

inline BigInt binomial(unsigned n, unsigned k) {
  BigInt out;
  mpz_bin_uiui(out.get_mpz_t(), n, k);
  return out;
}

}  // namespace tvd
