#pragma once

#include <cmath>
#include <limits>
#include <utility>
#include <vector>

namespace tvd {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Below this a log-weight contributes exactly 0 after exp().
inline constexpr double kLogUnderflow = -745.2;

/// x * log(y) with the 0 * log(0) = 0 convention (0^0 = 1).
inline double xlogy(double x, double log_y) { return x == 0.0 ? 0.0 : x * log_y; }

inline double safe_log(double x) { return x > 0.0 ? std::log(x) : kNegInf; }

/// |e^a - e^b| computed as e^max * (1 - e^(min - max)).
inline double abs_diff_exp(double a, double b) {
  if (a < b) std::swap(a, b);
  if (a == kNegInf) return 0.0;
  if (b == kNegInf) return std::exp(a);
  return std::exp(a) * -std::expm1(b - a);
}

/// Same as above with a common log factor applied before exponentiation.
inline double scaled_abs_diff_exp(double log_scale, double a, double b) {
  if (a < b) std::swap(a, b);
  if (a == kNegInf) return 0.0;
  if (b == kNegInf) return std::exp(log_scale + a);
  return std::exp(log_scale + a) * -std::expm1(b - a);
}

/// log(k!) for k = 0..n, from lgamma.
class LogFactorials {
 public:
  explicit LogFactorials(unsigned n) : table_(n + 1) {
    for (unsigned k = 0; k <= n; ++k) table_[k] = std::lgamma(static_cast<double>(k) + 1.0);
  }
  double operator()(unsigned k) const { return table_[k]; }
  double log_binom(unsigned n, unsigned k) const { return table_[n] - table_[k] - table_[n - k]; }
  unsigned size() const { return static_cast<unsigned>(table_.size()); }

 private:
  std::vector<double> table_;
};

}  // namespace tvd
