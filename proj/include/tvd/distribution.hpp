#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "tvd/error.hpp"
#include "tvd/field.hpp"

namespace tvd {

/// Checks the distribution invariants: nonnegative entries, unique labels and
/// total mass 1 (exactly for rationals, within kSumTolerance for doubles).
/// Nothing is renormalized.
template <Field F>
void validate(std::span<const std::string> labels, std::span<const F> probs) {
  if (labels.size() != probs.size())
    fail(Errc::InvalidArgument, "labels and probs differ in length");
  if (probs.empty()) fail(Errc::InvalidArgument, "empty distribution");

  std::unordered_set<std::string_view> seen;
  for (const auto& l : labels)
    if (!seen.insert(l).second) fail(Errc::DuplicateLabel, "duplicate label '" + l + "'");

  F total = 0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if constexpr (!is_exact_v<F>) {
      if (!std::isfinite(probs[i])) fail(Errc::InvalidArgument, "non-finite probability for '" + labels[i] + "'");
    }
    if (probs[i] < 0)
      fail(Errc::NegativeProbability, "negative probability " + to_string(probs[i]) + " for '" + labels[i] + "'");
    total += probs[i];
  }
  if constexpr (is_exact_v<F>) {
    if (total != 1) fail(Errc::SumNotOne, "probabilities sum to " + to_string(total) + " (deviation " + to_string(Rational(total - 1)) + ")");
  } else {
    if (std::fabs(total - 1.0) > kSumTolerance)
      fail(Errc::SumNotOne, "probabilities sum to " + to_string(total) + " (deviation " + to_string(total - 1.0) + ")");
  }
}

inline std::vector<std::string> default_labels(std::size_t size) {
  std::vector<std::string> out;
  out.reserve(size);
  for (std::size_t i = 0; i < size; ++i) out.push_back("z" + std::to_string(i + 1));
  return out;
}

/// Finite-support probability vector over a labeled alphabet. Immutable once
/// constructed; construction validates.
template <Field F>
class Distribution {
 public:
  using value_type = F;

  Distribution(std::vector<std::string> labels, std::vector<F> probs)
      : labels_(std::move(labels)), probs_(std::move(probs)) {
    validate<F>(labels_, probs_);
  }

  explicit Distribution(std::vector<F> probs) : labels_(default_labels(probs.size())), probs_(std::move(probs)) {
    validate<F>(labels_, probs_);
  }
  explicit Distribution(std::initializer_list<F> probs) : Distribution(std::vector<F>(probs)) {}

  std::size_t size() const { return probs_.size(); }
  const std::vector<std::string>& labels() const { return labels_; }
  std::span<const F> probs() const { return probs_; }
  const F& operator[](std::size_t i) const { return probs_[i]; }
  const std::string& label(std::size_t i) const { return labels_[i]; }

  std::optional<std::size_t> index_of(std::string_view label) const {
    const auto it = std::find(labels_.begin(), labels_.end(), label);
    if (it == labels_.end()) return std::nullopt;
    return static_cast<std::size_t>(it - labels_.begin());
  }

  /// Probability of `label`; labels outside the support have probability 0.
  F prob(std::string_view label) const {
    const auto i = index_of(label);
    return i ? probs_[*i] : F(0);
  }

  friend bool operator==(const Distribution& a, const Distribution& b) {
    return a.labels_ == b.labels_ && a.probs_ == b.probs_;
  }

 private:
  std::vector<std::string> labels_;
  std::vector<F> probs_;
};

/// Two distributions over the union of their alphabets. Labels of `p` come
/// first in their original order, then labels only `q` has.
template <Field F>
struct AlignedPair {
  std::vector<std::string> labels;
  std::vector<F> p;
  std::vector<F> q;

  std::size_t size() const { return labels.size(); }
};

template <Field F>
AlignedPair<F> align(const Distribution<F>& p, const Distribution<F>& q) {
  AlignedPair<F> out;
  out.labels = p.labels();
  out.p.assign(p.probs().begin(), p.probs().end());
  std::unordered_map<std::string_view, std::size_t> index;
  for (std::size_t i = 0; i < out.labels.size(); ++i) index.emplace(out.labels[i], i);
  out.q.assign(out.labels.size(), F(0));
  for (std::size_t j = 0; j < q.size(); ++j) {
    const auto it = index.find(q.label(j));
    if (it != index.end()) {
      out.q[it->second] = q[j];
    } else {
      out.labels.push_back(q.label(j));
      out.p.push_back(F(0));
      out.q.push_back(q[j]);
    }
  }
  return out;
}

/// Equality of probabilities: exact for rationals, within kEqualityTolerance
/// (absolute) for doubles.
template <Field F>
bool probs_equal(const F& a, const F& b) {
  if constexpr (is_exact_v<F>) {
    return a == b;
  } else {
    return std::fabs(a - b) <= kEqualityTolerance;
  }
}

template <Field F>
F variational_distance(std::span<const F> p, std::span<const F> q) {
  F sum = 0;
  for (std::size_t i = 0; i < p.size(); ++i) sum += abs_value(F(p[i] - q[i]));
  return F(sum / 2);
}

/// delta(P,Q) = 1/2 sum_z |P(z) - Q(z)| over the merged alphabet.
template <Field F>
F variational_distance(const Distribution<F>& p, const Distribution<F>& q) {
  const auto pair = align(p, q);
  return variational_distance<F>(pair.p, pair.q);
}

template <Field F>
struct DiffProfile {
  std::vector<std::string> diff_set;
  std::vector<std::size_t> diff_index;  // positions in the aligned alphabet
  std::optional<F> min_diff_prob;       // absent iff diff_set is empty

  bool empty() const { return diff_set.empty(); }
  bool pbar_positive() const { return min_diff_prob && *min_diff_prob > 0; }
};

template <Field F>
DiffProfile<F> diff_profile(const AlignedPair<F>& pair) {
  DiffProfile<F> out;
  for (std::size_t i = 0; i < pair.size(); ++i) {
    if (probs_equal<F>(pair.p[i], pair.q[i])) continue;
    out.diff_set.push_back(pair.labels[i]);
    out.diff_index.push_back(i);
    const F& lo = pair.p[i] < pair.q[i] ? pair.p[i] : pair.q[i];
    if (!out.min_diff_prob || lo < *out.min_diff_prob) out.min_diff_prob = lo;
  }
  return out;
}

template <Field F>
DiffProfile<F> diff_profile(const Distribution<F>& p, const Distribution<F>& q) {
  return diff_profile(align(p, q));
}

/// delta(P,Q) <= delta(P,P') + delta(P',Q). Always true; exposed for tests.
template <Field F>
bool triangle_check(const Distribution<F>& p, const Distribution<F>& pm, const Distribution<F>& q) {
  const F lhs = variational_distance(p, q);
  const F rhs = variational_distance(p, pm) + variational_distance(pm, q);
  if constexpr (is_exact_v<F>) {
    return lhs <= rhs;
  } else {
    return lhs <= rhs + 4 * std::numeric_limits<double>::epsilon();
  }
}

template <Field F>
Distribution<double> to_float(const Distribution<F>& d) {
  if constexpr (is_exact_v<F>) {
    std::vector<double> probs;
    probs.reserve(d.size());
    for (const auto& x : d.probs()) probs.push_back(to_double(x));
    return Distribution<double>(d.labels(), std::move(probs));
  } else {
    return d;
  }
}

}  // namespace tvd
