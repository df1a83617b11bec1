#pragma once

// Exact delta(P^n, Q^n) at three scales:
//
//   brute_force_distance   all |Z|^n outcome strings (the oracle)
//   type_class_distance    one term per count vector, streamed
//   two_point_distance     O(n^2) binomial double sum for pairs that differ
//                          at exactly two labels
//
// Rational mode works on integer numerators over a common denominator D, so
// the inner loops are GMP integer products and never canonicalize. Float mode
// carries every product in the log domain.

#include <cstdint>
#include <functional>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "tvd/distribution.hpp"
#include "tvd/log_math.hpp"
#include "tvd/two_point.hpp"

namespace tvd {

struct EngineLimits {
  std::uint64_t max_outcomes = 10'000'000;      // brute force: |Z|^n
  std::uint64_t max_type_classes = 10'000'000;  // C(n + |Z| - 1, |Z| - 1)
};

enum class Engine { Auto, BruteForce, TypeClass, TwoPoint };

const char* engine_name(Engine e) noexcept;
Engine parse_engine(std::string_view name);

template <Field F>
struct ProductQuery {
  Distribution<F> p;
  Distribution<F> q;
  unsigned n;

  ProductQuery(Distribution<F> p_, Distribution<F> q_, unsigned n_)
      : p(std::move(p_)), q(std::move(q_)), n(n_) {
    if (n == 0) fail(Errc::InvalidArgument, "n must be at least 1");
  }
};

/// Saturating counts used by the guards.
std::uint64_t outcome_count(std::size_t alphabet, unsigned n, std::uint64_t cap);
std::uint64_t type_class_count(std::size_t alphabet, unsigned n, std::uint64_t cap);

namespace detail {

struct ScaledPair {
  std::vector<BigInt> p;
  std::vector<BigInt> q;
  BigInt denominator;
};

inline ScaledPair scale_to_integers(const AlignedPair<Rational>& pair) {
  ScaledPair out;
  out.denominator = 1;
  auto absorb = [&](const Rational& x) { mpz_lcm(out.denominator.get_mpz_t(), out.denominator.get_mpz_t(), x.get_den_mpz_t()); };
  for (const auto& x : pair.p) absorb(x);
  for (const auto& x : pair.q) absorb(x);
  auto numerators = [&](const std::vector<Rational>& v) {
    std::vector<BigInt> r;
    r.reserve(v.size());
    for (const auto& x : v) r.push_back(BigInt(x.get_num() * (out.denominator / x.get_den())));
    return r;
  };
  out.p = numerators(pair.p);
  out.q = numerators(pair.q);
  return out;
}

inline Rational over_power(const BigInt& numerator, const BigInt& denominator, unsigned n) {
  BigInt den;
  mpz_pow_ui(den.get_mpz_t(), denominator.get_mpz_t(), n);
  return Rational(numerator, den);  // the Rational constructor does not canonicalize
}

inline Rational finish_rational(const BigInt& l1_numerator, const BigInt& denominator, unsigned n) {
  Rational out = over_power(l1_numerator, denominator, n);
  out /= 2;
  out.canonicalize();
  return out;
}

inline std::vector<BigInt> powers(const BigInt& base, unsigned n) {
  std::vector<BigInt> out(n + 1);
  out[0] = 1;
  for (unsigned i = 1; i <= n; ++i) out[i] = out[i - 1] * base;
  return out;
}

/// Binomial rows 0..n, built once; larger n falls back to mpz_bin_uiui.
class BinomialTable {
 public:
  explicit BinomialTable(unsigned n) : n_(n) {
    if (n > kMaxTabulated) return;
    rows_.resize(n + 1);
    for (unsigned i = 0; i <= n; ++i) {
      rows_[i].resize(i + 1);
      rows_[i][0] = rows_[i][i] = 1;
      for (unsigned j = 1; j < i; ++j) rows_[i][j] = rows_[i - 1][j - 1] + rows_[i - 1][j];
    }
  }
  BigInt operator()(unsigned n, unsigned k) const {
    if (!rows_.empty()) return rows_[n][k];
    return binomial(n, k);
  }

 private:
  static constexpr unsigned kMaxTabulated = 400;
  unsigned n_;
  std::vector<std::vector<BigInt>> rows_;
};

}  // namespace detail

// ---------------------------------------------------------------------------
// brute force

template <Field F>
F brute_force_distance(const ProductQuery<F>& query, const EngineLimits& limits = {}) {
  const auto pair = align(query.p, query.q);
  const std::size_t m = pair.size();
  const unsigned n = query.n;
  if (outcome_count(m, n, limits.max_outcomes + 1) > limits.max_outcomes)
    fail(Errc::TooLarge, "brute force needs " + std::to_string(m) + "^" + std::to_string(n) + " outcomes");

  if constexpr (is_exact_v<F>) {
    const auto scaled = detail::scale_to_integers(pair);
    std::vector<BigInt> wp(n + 1), wq(n + 1);
    wp[0] = 1;
    wq[0] = 1;
    BigInt total = 0;
    BigInt diff;
    std::function<void(unsigned)> walk = [&](unsigned depth) {
      if (depth == n) {
        diff = wp[n] - wq[n];
        total += abs(diff);
        return;
      }
      for (std::size_t z = 0; z < m; ++z) {
        wp[depth + 1] = wp[depth] * scaled.p[z];
        wq[depth + 1] = wq[depth] * scaled.q[z];
        if (wp[depth + 1] == 0 && wq[depth + 1] == 0) continue;  // whole subtree is 0 - 0
        walk(depth + 1);
      }
    };
    walk(0);
    return detail::finish_rational(total, scaled.denominator, n);
  } else {
    std::vector<double> lp(m), lq(m);
    for (std::size_t z = 0; z < m; ++z) {
      lp[z] = safe_log(pair.p[z]);
      lq[z] = safe_log(pair.q[z]);
    }
    std::vector<double> ap(n + 1, 0.0), aq(n + 1, 0.0);
    double total = 0.0;
    std::function<void(unsigned)> walk = [&](unsigned depth) {
      if (depth == n) {
        total += abs_diff_exp(ap[n], aq[n]);
        return;
      }
      for (std::size_t z = 0; z < m; ++z) {
        ap[depth + 1] = ap[depth] + lp[z];
        aq[depth + 1] = aq[depth] + lq[z];
        if (ap[depth + 1] == kNegInf && aq[depth + 1] == kNegInf) continue;
        walk(depth + 1);
      }
    };
    walk(0);
    return total / 2.0;
  }
}

// ---------------------------------------------------------------------------
// type classes

/// A count vector with its total probability under P^n and Q^n.
template <Field F>
struct TypeClass {
  std::vector<unsigned> counts;  // aligned with the merged alphabet
  F weight_p;
  F weight_q;
};

/// Streams every type class in lexicographic order of the count vector.
/// Memory is O(|Z|); the callback sees a reference valid for the call only.
template <Field F, class Fn>
void for_each_type_class(const AlignedPair<F>& pair, unsigned n, Fn&& fn) {
  const std::size_t m = pair.size();
  TypeClass<F> tc;
  tc.counts.assign(m, 0);
  std::function<void(std::size_t, unsigned)> walk = [&](std::size_t i, unsigned remaining) {
    if (i + 1 == m) {
      tc.counts[i] = remaining;
      if constexpr (is_exact_v<F>) {
        BigInt coef = 1;
        Rational wp = 1, wq = 1;
        unsigned left = n;
        for (std::size_t z = 0; z < m; ++z) {
          coef *= binomial(left, tc.counts[z]);
          left -= tc.counts[z];
          wp *= pow_int(pair.p[z], tc.counts[z]);
          wq *= pow_int(pair.q[z], tc.counts[z]);
        }
        tc.weight_p = Rational(coef) * wp;
        tc.weight_q = Rational(coef) * wq;
      } else {
        double lc = std::lgamma(n + 1.0), lp = 0.0, lq = 0.0;
        for (std::size_t z = 0; z < m; ++z) {
          lc -= std::lgamma(tc.counts[z] + 1.0);
          lp += xlogy(tc.counts[z], safe_log(pair.p[z]));
          lq += xlogy(tc.counts[z], safe_log(pair.q[z]));
        }
        tc.weight_p = lp == kNegInf ? 0.0 : std::exp(lc + lp);
        tc.weight_q = lq == kNegInf ? 0.0 : std::exp(lc + lq);
      }
      fn(static_cast<const TypeClass<F>&>(tc));
      return;
    }
    for (unsigned c = 0; c <= remaining; ++c) {
      tc.counts[i] = c;
      walk(i + 1, remaining - c);
    }
  };
  walk(0, n);
}

template <Field F>
F type_class_distance(const ProductQuery<F>& query, const EngineLimits& limits = {}) {
  const auto pair = align(query.p, query.q);
  const std::size_t m = pair.size();
  const unsigned n = query.n;
  if (type_class_count(m, n, limits.max_type_classes + 1) > limits.max_type_classes)
    fail(Errc::TooLarge, "type-class enumeration exceeds " + std::to_string(limits.max_type_classes) + " classes");

  if constexpr (is_exact_v<F>) {
    const auto scaled = detail::scale_to_integers(pair);
    std::vector<std::vector<BigInt>> pow_p(m), pow_q(m);
    for (std::size_t z = 0; z < m; ++z) {
      pow_p[z] = detail::powers(scaled.p[z], n);
      pow_q[z] = detail::powers(scaled.q[z], n);
    }
    const detail::BinomialTable binom(n);
    // Prefix products per depth: multinomial, P-weight, Q-weight.
    std::vector<BigInt> coef(m + 1), wp(m + 1), wq(m + 1);
    coef[0] = wp[0] = wq[0] = 1;
    BigInt total = 0, diff;
    std::function<void(std::size_t, unsigned)> walk = [&](std::size_t i, unsigned remaining) {
      if (i + 1 == m) {
        wp[m] = wp[i] * pow_p[i][remaining];
        wq[m] = wq[i] * pow_q[i][remaining];
        diff = wp[m] - wq[m];
        if (diff != 0) total += coef[i] * abs(diff);
        return;
      }
      for (unsigned c = 0; c <= remaining; ++c) {
        wp[i + 1] = wp[i] * pow_p[i][c];
        wq[i + 1] = wq[i] * pow_q[i][c];
        if (wp[i + 1] == 0 && wq[i + 1] == 0) continue;
        coef[i + 1] = coef[i] * binom(remaining, c);
        walk(i + 1, remaining - c);
      }
    };
    if (m == 1) {
      diff = pow_p[0][n] - pow_q[0][n];
      total = abs(diff);
    } else {
      walk(0, n);
    }
    return detail::finish_rational(total, scaled.denominator, n);
  } else {
    const LogFactorials lf(n);
    std::vector<double> lp(m), lq(m);
    for (std::size_t z = 0; z < m; ++z) {
      lp[z] = safe_log(pair.p[z]);
      lq[z] = safe_log(pair.q[z]);
    }
    std::vector<double> coef(m + 1, 0.0), ap(m + 1, 0.0), aq(m + 1, 0.0);
    double total = 0.0;
    std::function<void(std::size_t, unsigned)> walk = [&](std::size_t i, unsigned remaining) {
      if (i + 1 == m) {
        const double a = ap[i] + xlogy(remaining, lp[i]);
        const double b = aq[i] + xlogy(remaining, lq[i]);
        total += scaled_abs_diff_exp(coef[i], a, b);
        return;
      }
      for (unsigned c = 0; c <= remaining; ++c) {
        ap[i + 1] = ap[i] + xlogy(c, lp[i]);
        aq[i + 1] = aq[i] + xlogy(c, lq[i]);
        if (ap[i + 1] == kNegInf && aq[i + 1] == kNegInf) continue;
        coef[i + 1] = coef[i] + lf.log_binom(remaining, c);
        walk(i + 1, remaining - c);
      }
    };
    if (m == 1) return 0.0;
    walk(0, n);
    return total / 2.0;
  }
}

// ---------------------------------------------------------------------------
// two-point block

/// delta between the n-fold products of two distributions that agree except
/// on a block {z1, z2} carrying `mass` in both; `x_from` and `x_to` are the
/// respective probabilities of z1.
///
///   delta = 1/2 sum_k q(k) sum_r C(k,r) |alpha0^r beta0^(k-r) - alpha1^r beta1^(k-r)|
///   q(k)  = C(n,k) mass^k (1 - mass)^(n-k)
template <Field F>
F two_point_block_distance(const F& mass, const F& x_from, const F& x_to, unsigned n) {
  if (n == 0) fail(Errc::InvalidArgument, "n must be at least 1");
  if (mass < 0 || mass > 1 || x_from < 0 || x_to < 0 || x_from > mass || x_to > mass)
    fail(Errc::OutOfRange, "two-point block probabilities out of range");

  if constexpr (is_exact_v<F>) {
    BigInt d = 1;
    for (const Rational* x : {&mass, &x_from, &x_to})
      mpz_lcm(d.get_mpz_t(), d.get_mpz_t(), x->get_den_mpz_t());
    auto numer = [&](const Rational& x) { return BigInt(x.get_num() * (d / x.get_den())); };
    const BigInt m = numer(mass);
    const BigInt a0 = numer(x_from), a1 = numer(x_to);
    const BigInt b0 = m - a0, b1 = m - a1;
    const BigInt w = d - m;
    const auto pa0 = detail::powers(a0, n), pb0 = detail::powers(b0, n);
    const auto pa1 = detail::powers(a1, n), pb1 = detail::powers(b1, n);
    const auto pw = detail::powers(w, n);

    BigInt total = 0, inner, diff;
    std::vector<BigInt> row{BigInt(1)};  // C(k, .)
    BigInt outer = 1;                    // C(n, k)
    for (unsigned k = 0; k <= n; ++k) {
      if (k > 0) {
        row.push_back(BigInt(1));
        for (unsigned r = k - 1; r >= 1; --r) row[r] += row[r - 1];
        outer *= (n - k + 1);
        mpz_divexact_ui(outer.get_mpz_t(), outer.get_mpz_t(), k);
      }
      if (pw[n - k] == 0) continue;
      inner = 0;
      for (unsigned r = 0; r <= k; ++r) {
        diff = pa0[r] * pb0[k - r] - pa1[r] * pb1[k - r];
        if (diff != 0) inner += row[r] * abs(diff);
      }
      if (inner != 0) total += outer * pw[n - k] * inner;
    }
    return detail::finish_rational(total, d, n);
  } else {
    if (mass == 0.0) return 0.0;
    const LogFactorials lf(n);
    const double la0 = safe_log(x_from / mass), lb0 = safe_log((mass - x_from) / mass);
    const double la1 = safe_log(x_to / mass), lb1 = safe_log((mass - x_to) / mass);
    const double lm = safe_log(mass), lw = safe_log(1.0 - mass);
    double total = 0.0;
    for (unsigned k = 0; k <= n; ++k) {
      const double lq = lf.log_binom(n, k) + xlogy(k, lm) + xlogy(n - k, lw);
      if (lq < kLogUnderflow) continue;
      double inner = 0.0;
      for (unsigned r = 0; r <= k; ++r) {
        const double a = xlogy(r, la0) + xlogy(k - r, lb0);
        const double b = xlogy(r, la1) + xlogy(k - r, lb1);
        const double scale = lq + lf.log_binom(k, r);
        if (scale + std::max(a, b) < kLogUnderflow) continue;
        inner += scaled_abs_diff_exp(scale, a, b);
      }
      total += inner;
    }
    return total / 2.0;
  }
}

/// The block a two-point-differing pair acts on.
template <Field F>
struct TwoPointView {
  std::size_t i1;
  std::size_t i2;
  F mass;
  F x_from;
  F x_to;
};

/// Returns the block when P and Q differ at exactly two labels, std::nullopt
/// when they are equal, and throws NotTwoPoint otherwise.
template <Field F>
std::optional<TwoPointView<F>> two_point_view(const AlignedPair<F>& pair) {
  const auto profile = diff_profile(pair);
  if (profile.empty()) return std::nullopt;
  if (profile.diff_index.size() != 2)
    fail(Errc::NotTwoPoint, "distributions differ at " + std::to_string(profile.diff_index.size()) + " labels, not 2");
  const std::size_t i1 = profile.diff_index[0], i2 = profile.diff_index[1];
  TwoPointView<F> v{i1, i2, F(pair.p[i1] + pair.p[i2]), pair.p[i1], pair.q[i1]};
  if constexpr (!is_exact_v<F>) {
    if (std::fabs(v.mass - (pair.q[i1] + pair.q[i2])) > kSumTolerance)
      fail(Errc::NotTwoPoint, "block mass differs between the two distributions");
    if (v.x_to > v.mass) v.x_to = v.mass;
  }
  return v;
}

template <Field F>
F two_point_distance(const ProductQuery<F>& query) {
  const auto view = two_point_view(align(query.p, query.q));
  if (!view) return F(0);
  return two_point_block_distance<F>(view->mass, view->x_from, view->x_to, query.n);
}

/// delta(P_t^n, P_{t0}^n) for a family.
template <Field F>
F two_point_distance(const TwoPointFamily<F>& family, const F& t, unsigned n) {
  if (!family.contains(t)) fail(Errc::OutOfRange, "t = " + to_string(t) + " leaves the family's range");
  F x = family.prob_z1(t);
  if constexpr (!is_exact_v<F>) x = std::clamp(x, 0.0, family.mass());
  return two_point_block_distance<F>(family.mass(), family.p(), x, n);
}

/// delta(P_a^n, P_b^n) for two parameters of the same family.
template <Field F>
F two_point_distance(const TwoPointFamily<F>& family, const F& a, const F& b, unsigned n) {
  if (!family.contains(a) || !family.contains(b)) fail(Errc::OutOfRange, "parameter leaves the family's range");
  F xa = family.prob_z1(a), xb = family.prob_z1(b);
  if constexpr (!is_exact_v<F>) {
    xa = std::clamp(xa, 0.0, family.mass());
    xb = std::clamp(xb, 0.0, family.mass());
  }
  return two_point_block_distance<F>(family.mass(), xa, xb, n);
}

// ---------------------------------------------------------------------------
// dispatch

template <Field F>
struct ProductDistance {
  F value;
  Engine engine;
};

/// Auto picks the two-point engine when the pair differs at two labels, the
/// type-class engine otherwise.
template <Field F>
ProductDistance<F> product_distance(const ProductQuery<F>& query, Engine engine = Engine::Auto,
                                    const EngineLimits& limits = {}) {
  if (engine == Engine::Auto) {
    const auto profile = diff_profile(query.p, query.q);
    if (profile.empty()) return {F(0), Engine::TypeClass};
    engine = profile.diff_index.size() == 2 ? Engine::TwoPoint : Engine::TypeClass;
  }
  switch (engine) {
    case Engine::BruteForce: return {brute_force_distance(query, limits), engine};
    case Engine::TypeClass: return {type_class_distance(query, limits), engine};
    case Engine::TwoPoint: return {two_point_distance(query), engine};
    case Engine::Auto: break;
  }
  fail(Errc::InvalidArgument, "unknown engine");
}

}  // namespace tvd
