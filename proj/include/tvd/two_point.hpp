#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tvd/distribution.hpp"

namespace tvd {

/// One-parameter family P_t that moves mass at unit rate from z2 to z1:
///
///   P_t(z1) = p  + (t - t0)
///   P_t(z2) = p' - (t - t0)
///
/// and leaves every other coordinate of `base` = P_{t0} untouched. The
/// default t0 = p makes P_t(z1) = t.
template <Field F>
class TwoPointFamily {
 public:
  TwoPointFamily(Distribution<F> base, const std::string& z1, const std::string& z2,
                 std::optional<F> t0 = std::nullopt)
      : base_(std::move(base)) {
    if (z1 == z2) fail(Errc::InvalidArgument, "two-point family needs two distinct labels");
    const auto i1 = base_.index_of(z1);
    const auto i2 = base_.index_of(z2);
    if (!i1 || !i2) fail(Errc::InvalidArgument, "label '" + (i1 ? z2 : z1) + "' not in the base distribution");
    i1_ = *i1;
    i2_ = *i2;
    p_ = base_[i1_];
    p_prime_ = base_[i2_];
    if (!(p_ > 0) || !(p_prime_ > 0))
      fail(Errc::NonpositiveMass, "two-point family needs P(z1) > 0 and P(z2) > 0");
    t0_ = t0 ? *t0 : p_;
  }

  const Distribution<F>& base() const { return base_; }
  std::size_t index1() const { return i1_; }
  std::size_t index2() const { return i2_; }
  const std::string& z1() const { return base_.label(i1_); }
  const std::string& z2() const { return base_.label(i2_); }
  const F& p() const { return p_; }
  const F& p_prime() const { return p_prime_; }
  const F& t0() const { return t0_; }
  F mass() const { return F(p_ + p_prime_); }

  F prob_z1(const F& t) const { return F(p_ + (t - t0_)); }
  F prob_z2(const F& t) const { return F(p_prime_ - (t - t0_)); }

  /// Parameter range on which P_t is a probability distribution.
  F t_min() const { return F(t0_ - p_); }
  F t_max() const { return F(t0_ + p_prime_); }
  bool contains(const F& t) const { return !(t < t_min()) && !(t > t_max()); }

  Distribution<F> at(const F& t) const {
    if (!contains(t)) fail(Errc::OutOfRange, "t = " + to_string(t) + " leaves the family's range");
    std::vector<F> probs(base_.probs().begin(), base_.probs().end());
    probs[i1_] = prob_z1(t);
    probs[i2_] = prob_z2(t);
    if constexpr (!is_exact_v<F>) {
      // Rounding can leave -0 or -1e-17 at the range ends.
      if (probs[i1_] < 0) probs[i1_] = 0;
      if (probs[i2_] < 0) probs[i2_] = 0;
    }
    return Distribution<F>(base_.labels(), std::move(probs));
  }

 private:
  Distribution<F> base_;
  std::size_t i1_ = 0;
  std::size_t i2_ = 0;
  F p_;
  F p_prime_;
  F t0_;
};

}  // namespace tvd
