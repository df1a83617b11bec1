#include "tvd/sampling.hpp"

#include <cmath>
#include <future>
#include <random>
#include <vector>

#include "tvd/log_math.hpp"

namespace tvd {

namespace {

struct Moments {
  std::uint64_t count = 0;
  double mean = 0;
  double m2 = 0;

  void add(double x) {
    ++count;
    const double d = x - mean;
    mean += d / static_cast<double>(count);
    m2 += d * (x - mean);
  }

  // Chan et al. pairwise merge.
  void merge(const Moments& o) {
    if (o.count == 0) return;
    if (count == 0) {
      *this = o;
      return;
    }
    const double total = static_cast<double>(count + o.count);
    const double d = o.mean - mean;
    mean += d * static_cast<double>(o.count) / total;
    m2 += o.m2 + d * d * static_cast<double>(count) * static_cast<double>(o.count) / total;
    count += o.count;
  }
};

Moments run_shard(const std::vector<double>& weights, const std::vector<double>& log_ratio, unsigned n,
                  std::uint64_t samples, std::uint64_t seed, unsigned shard) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), shard};
  std::mt19937_64 rng(seq);
  std::discrete_distribution<std::size_t> draw(weights.begin(), weights.end());
  Moments m;
  for (std::uint64_t s = 0; s < samples; ++s) {
    double lr = 0.0;
    for (unsigned i = 0; i < n; ++i) lr += log_ratio[draw(rng)];
    // lr = log(Q^n/P^n); -inf when Q vanishes somewhere on the sample
    m.add(lr >= 0.0 ? 0.0 : -std::expm1(lr));
  }
  return m;
}

}  // namespace

McEstimate mc_distance(const AlignedPair<double>& pair, unsigned n, std::uint64_t samples, std::uint64_t seed,
                       unsigned shards) {
  if (n == 0) fail(Errc::InvalidArgument, "n must be at least 1");
  if (samples < kMinSamples) fail(Errc::InvalidArgument, "need at least 100 samples");
  if (shards == 0 || shards > samples) fail(Errc::InvalidArgument, "shard count must lie in [1, samples]");

  // Labels with P(z) = 0 are never drawn, so their ratio is never needed.
  std::vector<double> weights(pair.p), log_ratio(pair.size(), 0.0);
  for (std::size_t z = 0; z < pair.size(); ++z)
    if (pair.p[z] > 0) log_ratio[z] = safe_log(pair.q[z]) - std::log(pair.p[z]);

  std::vector<std::future<Moments>> jobs;
  jobs.reserve(shards);
  for (unsigned s = 0; s < shards; ++s) {
    const std::uint64_t share = samples / shards + (s < samples % shards ? 1 : 0);
    jobs.push_back(std::async(shards == 1 ? std::launch::deferred : std::launch::async, run_shard,
                              std::cref(weights), std::cref(log_ratio), n, share, seed, s));
  }
  Moments total;
  for (auto& j : jobs) total.merge(j.get());

  McEstimate out;
  out.mean = total.mean;
  const double variance = total.count > 1 ? total.m2 / static_cast<double>(total.count - 1) : 0.0;
  out.half_width_95 = 1.96 * std::sqrt(variance / static_cast<double>(total.count));
  out.samples = samples;
  out.seed = seed;
  out.shards = shards;
  return out;
}

}  // namespace tvd
