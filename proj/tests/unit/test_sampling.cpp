#include <cmath>

#include "doctest.h"
#include "tvd/sampling.hpp"

using tvd::Distribution;

namespace {

tvd::McEstimate run(std::vector<double> p, std::vector<double> q, unsigned n, std::uint64_t samples,
                    std::uint64_t seed, unsigned shards = 1) {
  return tvd::mc_distance(tvd::ProductQuery<double>(Distribution<double>(std::move(p)), Distribution<double>(std::move(q)), n),
                          samples, seed, shards);
}

}  // namespace

TEST_SUITE("sampling") {
  TEST_CASE("identical distributions") {
    const auto e = run({0.3, 0.7}, {0.3, 0.7}, 5, 1000, 1);
    CHECK(e.mean == 0.0);
    CHECK(e.half_width_95 == 0.0);
  }

  TEST_CASE("four-outcome example") {
    const auto e = run({0.5, 0.5}, {0.4, 0.6}, 2, 1000000, 7);
    CHECK(std::fabs(e.mean - 0.11) <= e.half_width_95);
    CHECK(e.samples == 1000000);
    CHECK(e.seed == 7);
  }

  TEST_CASE("point mass") {
    const double exact = 1 - std::pow(0.99, 10);
    const auto e = run({1.0, 0.0}, {0.99, 0.01}, 10, 100000, 3);
    CHECK(std::fabs(e.mean - exact) <= e.half_width_95 + 1e-15);
    CHECK(e.mean == doctest::Approx(exact).epsilon(1e-12));
  }

  TEST_CASE("deterministic under a fixed seed") {
    const auto a = run({0.2, 0.3, 0.5}, {0.3, 0.3, 0.4}, 6, 20000, 99, 3);
    const auto b = run({0.2, 0.3, 0.5}, {0.3, 0.3, 0.4}, 6, 20000, 99, 3);
    CHECK(a.mean == b.mean);
    CHECK(a.half_width_95 == b.half_width_95);
    const auto c = run({0.2, 0.3, 0.5}, {0.3, 0.3, 0.4}, 6, 20000, 100, 3);
    CHECK(a.mean != c.mean);
    CHECK(a.shards == 3);
  }

  TEST_CASE("estimates stay in [0,1]") {
    const auto e = run({0.5, 0.5}, {0.0, 1.0}, 3, 5000, 5);
    CHECK(e.mean >= 0.0);
    CHECK(e.mean <= 1.0);
    CHECK(std::fabs(e.mean - 0.875) <= e.half_width_95 * 1.5);
  }

  TEST_CASE("sample floor") {
    CHECK_THROWS_AS(run({0.5, 0.5}, {0.4, 0.6}, 2, 10, 1), tvd::Error);
  }
}
