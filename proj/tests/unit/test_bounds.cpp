#include <cmath>
#include <numbers>

#include "doctest.h"
#include "support/oracles.hpp"
#include "tvd/bounds.hpp"

using doctest::Approx;
using tvd::Distribution;
using tvd::Rational;

namespace {

constexpr double kPi = std::numbers::pi;

Rational R(const char* s) { return tvd::parse_number<Rational>(s); }

tvd::Errc error_of(auto&& fn) {
  try {
    fn();
  } catch (const tvd::Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return tvd::Errc::InvalidArgument;
}

}  // namespace

TEST_SUITE("bounds") {
  TEST_CASE("linear bound") {
    auto b = tvd::linear_bound(0.1, 5);
    CHECK(b.value == Approx(0.5));
    CHECK(!b.capped);
    CHECK(tvd::linear_bound(0.0, 17).value == 0.0);
    b = tvd::linear_bound(0.3, 4);
    CHECK(b.value == 1.0);
    CHECK(b.capped);
    CHECK(error_of([] { tvd::linear_bound(1.5, 2); }) == tvd::Errc::OutOfRange);
  }

  TEST_CASE("first square-root bound") {
    CHECK(tvd::lemma1_first_bound(0.1, 0.25, 3) == Approx(std::sqrt(4 / kPi) * std::sqrt(7.0) * 0.1));
    CHECK(tvd::lemma1_first_bound(0.1, 0.25, 3) == Approx(0.29855).epsilon(1e-5));
    CHECK(tvd::lemma1_first_bound(0.0, 0.25, 3) == 0.0);
    CHECK(error_of([] { tvd::lemma1_first_bound(0.1, 0.0, 3); }) == tvd::Errc::PbarNotPositive);
  }

  TEST_CASE("second square-root bound") {
    CHECK(tvd::lemma1_second_bound(0.1, 0.2, 8) == Approx(std::sqrt(20.0) * 0.1));
    CHECK(tvd::lemma1_second_bound(0.1, 0.2, 8) == Approx(0.44721).epsilon(1e-5));
    CHECK(tvd::lemma1_second_bound(0.0, 0.2, 8) == 0.0);
    CHECK(tvd::lemma1_second_bound(0.3, 0.5, 1) == Approx(0.3).epsilon(1e-15));
    CHECK(tvd::lemma1_second_bound(0.3, 0.5, 1) >= 0.3);
    CHECK(error_of([] { tvd::lemma1_second_bound(0.1, -1.0, 3); }) == tvd::Errc::PbarNotPositive);
    const double b1 = tvd::lemma1_second_bound(0.2, 0.3, 10), b4 = tvd::lemma1_second_bound(0.2, 0.3, 40);
    CHECK(b4 == Approx(2 * b1).epsilon(1e-14));
  }

  TEST_CASE("derivative bounds") {
    CHECK(tvd::lemma2_first_bound(0.5, 0.5, 1) == Approx(2 * std::sqrt(3.0) / std::sqrt(2 * kPi)));
    CHECK(tvd::lemma2_first_bound(0.5, 0.5, 1) == Approx(1.38198).epsilon(1e-5));
    CHECK(tvd::lemma2_first_bound(0.25, 0.25, 4) == Approx(8 / std::sqrt(2 * kPi)));
    CHECK(tvd::lemma2_first_bound(0.25, 0.25, 4) == Approx(3.19154).epsilon(1e-5));
    CHECK(error_of([] { tvd::lemma2_first_bound(0.0, 0.5, 1); }) == tvd::Errc::NonpositiveMass);
    CHECK(tvd::lemma2_second_bound(0.5, 0.5, 4) == Approx(2.0));
    CHECK(tvd::lemma2_second_bound(0.2, 0.3, 1) == Approx(1.44338).epsilon(1e-5));
    CHECK(tvd::lemma2_second_bound(0.2, 0.3, 12) == Approx(2 * tvd::lemma2_second_bound(0.2, 0.3, 3)).epsilon(1e-14));
    CHECK(error_of([] { tvd::lemma2_second_bound(0.2, 0.0, 1); }) == tvd::Errc::NonpositiveMass);
    CHECK(error_of([] { tvd::lemma2_second_bound(0.7, 0.6, 1); }) == tvd::Errc::InvalidArgument);
  }

  TEST_CASE("per-k majorants") {
    CHECK(tvd::s_k(0.25, 0.25, 2) == Approx(2 * std::sqrt(4 / (kPi / 2))));
    CHECK(tvd::s_k(0.25, 0.25, 2) == Approx(3.19154).epsilon(1e-5));
    CHECK(tvd::s_tilde_k(0.25, 0.25, 0) == 0.0);
    CHECK(tvd::s_tilde_k(0.25, 0.25, 2) == Approx(2 * std::sqrt(2.0)));
    CHECK(error_of([] { tvd::s_k(0.0, 0.25, 2); }) == tvd::Errc::NonpositiveMass);
    CHECK(error_of([] { tvd::s_tilde_k(0.25, 0.0, 2); }) == tvd::Errc::NonpositiveMass);
  }

  TEST_CASE("majorants at the binomial mean equal the derivative bounds") {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> u(0.01, 0.49);
    for (int i = 0; i < 1000; ++i) {
      const double p = u(rng), pp = u(rng);
      const unsigned n = 1 + static_cast<unsigned>(rng() % 300);
      CHECK(tvd::s_k(p, pp, n * (p + pp)) == Approx(tvd::lemma2_first_bound(p, pp, n)).epsilon(1e-12));
      CHECK(tvd::s_tilde_k(p, pp, n * (p + pp)) == Approx(tvd::lemma2_second_bound(p, pp, n)).epsilon(1e-12));
    }
  }

  TEST_CASE("majorants are concave in k") {
    std::mt19937_64 rng(32);
    std::uniform_real_distribution<double> u(0.01, 0.49);
    for (int i = 0; i < 200; ++i) {
      const double p = u(rng), pp = u(rng);
      for (double k = 0.5; k < 200; k += 0.5) {
        const double d2 = tvd::s_k(p, pp, k + 0.5) - 2 * tvd::s_k(p, pp, k) + tvd::s_k(p, pp, k - 0.5);
        const double e2 = tvd::s_tilde_k(p, pp, k + 0.5) - 2 * tvd::s_tilde_k(p, pp, k) + tvd::s_tilde_k(p, pp, k - 0.5);
        REQUIRE(d2 <= 1e-12 * tvd::s_k(p, pp, k));
        REQUIRE(e2 <= 1e-12 * tvd::s_tilde_k(p, pp, k));
      }
    }
  }

  TEST_CASE("s below s~ once 1/min(alpha,beta) <= k/2") {
    std::mt19937_64 rng(33);
    std::uniform_real_distribution<double> u(0.01, 0.49);
    for (int i = 0; i < 2000; ++i) {
      const double p = u(rng), pp = u(rng);
      const double lo = std::min(p, pp) / (p + pp);
      for (unsigned k = 1; k <= 400; ++k) {
        if (1.0 / lo > k / 2.0) continue;
        REQUIRE(tvd::s_k(p, pp, k) <= tvd::s_tilde_k(p, pp, k));
      }
    }
  }

  TEST_CASE("neither square-root bound dominates the other") {
    // first < second needs n large relative to 1/pbar; the reverse at n = 1
    CHECK(tvd::lemma1_first_bound(0.1, 0.4, 1000) < tvd::lemma1_second_bound(0.1, 0.4, 1000));
    CHECK(tvd::lemma1_first_bound(0.1, 0.05, 1) > tvd::lemma1_second_bound(0.1, 0.05, 1));
  }

  TEST_CASE("binomial Stirling bound") {
    const auto c = tvd::stirling_binom_check(2, 1);
    CHECK(c.lhs == 0.5);
    CHECK(c.rhs == Approx(std::sqrt(2 / (2 * kPi))));
    CHECK(c.rhs == Approx(0.56419).epsilon(1e-5));
    CHECK(c.holds);
    CHECK(tvd::stirling_binom_check(100, 50).holds);
    CHECK(error_of([] { tvd::stirling_binom_check(5, 5); }) == tvd::Errc::OutOfRange);
    CHECK(error_of([] { tvd::stirling_binom_check(5, 0); }) == tvd::Errc::OutOfRange);
  }

  TEST_CASE("Stirling verifier matches the exact check") {
    tvd::StirlingVerifier v(200);
    for (unsigned n = 2; n <= 200; n += 7)
      for (unsigned k = 1; k < n; ++k) REQUIRE(v.holds(n, k) == tvd::stirling_binom_check(n, k).holds);
    const auto r = v.scan(200);
    CHECK(r.checked == 199);
    CHECK(r.violations == 0);
  }

  TEST_CASE("Stirling lhs against an exact oracle") {
    for (unsigned n = 2; n <= 40; ++n)
      for (unsigned k = 1; k < n; ++k) {
        Rational lhs = tvd::binomial(n, k);
        lhs *= tvd::pow_int(Rational(k, n), k) * tvd::pow_int(Rational(n - k, n), n - k);
        CHECK(tvd::stirling_binom_check(n, k).lhs == Approx(lhs.get_d()).epsilon(1e-14));
      }
  }

  TEST_CASE("maximum of x^k (1-x)^(n-k)") {
    CHECK(tvd::maxpot_check(10, 3, 0.3));
    CHECK(tvd::maxpot_check(10, 0, 0.7));
    CHECK(tvd::maxpot_check(10, 10, 0.0));
    CHECK(tvd::maxpot_check(7, 0, 0.0));
    std::mt19937_64 rng(34);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 5000; ++i) {
      const double n = 1 + 100 * u(rng);
      const double k = n * u(rng);
      REQUIRE(tvd::maxpot_check(n, k, u(rng)));
    }
    CHECK(error_of([] { tvd::maxpot_check(5, 6, 0.5); }) == tvd::Errc::OutOfRange);
    CHECK(error_of([] { tvd::maxpot_check(5, 2, 1.5); }) == tvd::Errc::OutOfRange);
  }

  TEST_CASE("derivative sign of x^k (1-x)^(n-k)") {
    CHECK(tvd::derpot_sign_check(10, 3, 0.2));
    CHECK(tvd::derpot_sign_check(10, 3, 0.5));
    CHECK(tvd::derpot_sign_check(10, 0, 0.5));
    CHECK(error_of([] { tvd::derpot_sign_check(10, 3, 0.0); }) == tvd::Errc::OutOfRange);
  }

  TEST_CASE("bound report") {
    Distribution<Rational> p({R("0.5"), R("0.3"), R("0.2")}), q({R("0.5"), R("0.2"), R("0.3")});
    const auto r = tvd::bound_report(p, q, 4);
    CHECK(r.delta_1 == Approx(0.1));
    CHECK(r.delta_1 >= 0.1);
    CHECK(r.delta_1_exact == "1/10");
    REQUIRE(r.pbar);
    CHECK(*r.pbar <= 0.2);
    CHECK(r.lemma1_applicable);
    REQUIRE(r.lemma1_first);
    REQUIRE(r.lemma1_second);
    REQUIRE(r.distance);
    CHECK(r.engine == tvd::Engine::TwoPoint);
    CHECK(tvd::dominance_holds(r));

    Distribution<Rational> a({R("1"), R("0")}), b({R("0.9"), R("0.1")});
    const auto e = tvd::bound_report(a, b, 3);
    CHECK(!e.lemma1_applicable);
    CHECK(!e.lemma1_first);
    CHECK(e.distance_exact == "271/1000");
    CHECK(tvd::dominance_holds(e));

    const auto same = tvd::bound_report(p, p, 3);
    CHECK(same.diff_set.empty());
    CHECK(!same.pbar);
    CHECK(*same.distance == 0.0);
  }

  TEST_CASE("dominance on random instances") {
    std::mt19937_64 rng(35);
    for (int i = 0; i < 200; ++i) {
      const std::size_t m = 2 + i % 3;
      const unsigned n = 1 + i % 6;
      Distribution<Rational> p(oracle::random_rational(rng, m)), q(oracle::random_rational(rng, m));
      const auto r = tvd::bound_report(p, q, n);
      REQUIRE(r.distance);
      REQUIRE(tvd::dominance_holds(r));
      const Rational exact = oracle::product_distance(std::vector<Rational>(p.probs().begin(), p.probs().end()),
                                                      std::vector<Rational>(q.probs().begin(), q.probs().end()), n);
      CHECK(exact <= Rational(r.linear.value));
      if (r.lemma1_applicable) {
        CHECK(exact <= Rational(*r.lemma1_first));
        CHECK(exact <= Rational(*r.lemma1_second));
      }
    }
  }
}
