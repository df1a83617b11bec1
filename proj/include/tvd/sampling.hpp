#pragma once

#include <cstdint>

#include "tvd/distribution.hpp"
#include "tvd/exact_engine.hpp"

namespace tvd {

/// Monte Carlo estimate of delta(P^n, Q^n) = E_{x ~ P^n}[max(0, 1 - Q^n(x)/P^n(x))].
struct McEstimate {
  double mean = 0;
  double half_width_95 = 0;  // 1.96 * sample standard error
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
  unsigned shards = 1;
};

inline constexpr std::uint64_t kMinSamples = 100;

/// Samples from P^n only; the likelihood ratio is accumulated in the log
/// domain. Shard i draws from its own generator seeded with (seed, i) and
/// shards are merged in index order, so the result depends only on
/// (seed, samples, shards).
McEstimate mc_distance(const AlignedPair<double>& pair, unsigned n, std::uint64_t samples, std::uint64_t seed,
                       unsigned shards = 1);

template <Field F>
McEstimate mc_distance(const ProductQuery<F>& query, std::uint64_t samples, std::uint64_t seed, unsigned shards = 1) {
  return mc_distance(align(to_float(query.p), to_float(query.q)), query.n, samples, seed, shards);
}

}  // namespace tvd
