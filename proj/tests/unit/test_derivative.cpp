#include <cmath>

#include "doctest.h"
#include "support/oracles.hpp"
#include "tvd/derivative.hpp"

using doctest::Approx;
using tvd::Distribution;
using tvd::Rational;
using tvd::TwoPointFamily;

namespace {

Rational R(const char* s) { return tvd::parse_number<Rational>(s); }

TwoPointFamily<Rational> family(const Rational& p, const Rational& pp) {
  std::vector<Rational> probs{p, pp};
  if (p + pp < 1) probs.push_back(1 - p - pp);
  return {Distribution<Rational>(probs), "z1", "z2"};
}

TwoPointFamily<double> ffamily(double p, double pp) {
  std::vector<double> probs{p, pp};
  if (p + pp < 1) probs.push_back(1 - p - pp);
  return {Distribution<double>(probs), "z1", "z2"};
}

// a_{k,r}(t) = (a+t)^r (b-t)^(k-r) / mass^k - a^r b^(k-r) / mass^k, exact
Rational a_kr(unsigned k, unsigned r, const Rational& p, const Rational& pp, const Rational& t) {
  const Rational mass = p + pp;
  return (tvd::pow_int(Rational(p + t), r) * tvd::pow_int(Rational(pp - t), k - r) -
          tvd::pow_int(p, r) * tvd::pow_int(pp, k - r)) /
         tvd::pow_int(mass, k);
}

}  // namespace

TEST_SUITE("derivative_engine") {
  TEST_CASE("rbar is floor(k alpha)") {
    CHECK(tvd::rbar<Rational>(10, R("0.3"), R("0.2")) == 6);
    CHECK(tvd::rbar<Rational>(5, R("1/4"), R("1/4")) == 2);
    CHECK(tvd::rbar<Rational>(4, R("1/4"), R("1/4")) == 2);
    CHECK(tvd::rbar<double>(4, 0.25, 0.25) == 2);
  }

  TEST_CASE("a' examples") {
    CHECK(tvd::a_prime<Rational>(1, 0, R("1/4"), R("1/4")) == 2);
    CHECK(tvd::a_prime<double>(1, 0, 0.25, 0.25) == Approx(2.0));
    CHECK_THROWS_AS(tvd::a_prime<Rational>(2, 3, R("1/4"), R("1/4")), tvd::Error);
  }

  TEST_CASE("a' is the derivative of a_{k,r} at 0") {
    const Rational p = R("0.3"), pp = R("0.2"), h = R("1/1000000");
    for (unsigned k = 1; k <= 8; ++k)
      for (unsigned r = 0; r <= k; ++r) {
        const Rational fd = (a_kr(k, r, p, pp, h) - a_kr(k, r, p, pp, -h)) / (2 * h);
        const Rational ap = tvd::a_prime<Rational>(k, r, p, pp);
        CHECK(Rational(abs(fd - ap)).get_d() <= 1e-9);
      }
  }

  TEST_CASE("a' sums to zero and changes sign at rbar") {
    std::mt19937_64 rng(41);
    for (int i = 0; i < 100; ++i) {
      const Rational p = oracle::random_in(rng, 0, Rational(1, 2)), pp = oracle::random_in(rng, 0, Rational(1, 2));
      for (unsigned k = 1; k <= 30; ++k) {
        Rational sum = 0;
        const unsigned rb = tvd::rbar<Rational>(k, p, pp);
        for (unsigned r = 0; r <= k; ++r) {
          const Rational ap = tvd::a_prime<Rational>(k, r, p, pp);
          sum += Rational(tvd::binomial(k, r)) * ap;
          REQUIRE((ap >= 0) == (r <= rb));
        }
        REQUIRE(sum == 0);
      }
    }
  }

  TEST_CASE("inner-sum collapse, exact") {
    std::mt19937_64 rng(42);
    for (int i = 0; i < 20; ++i) {
      const Rational p = oracle::random_in(rng, 0, Rational(1, 2)), pp = oracle::random_in(rng, 0, Rational(1, 2));
      for (unsigned k = 1; k <= 120; ++k) {
        const auto c = tvd::inner_sum_identity_check<Rational>(k, p, pp);
        REQUIRE(c.sum == c.closed);
      }
    }
    CHECK_THROWS_AS(tvd::inner_sum_identity_check<Rational>(0, R("0.2"), R("0.3")), tvd::Error);
  }

  TEST_CASE("inner-sum collapse, float") {
    std::mt19937_64 rng(43);
    std::uniform_real_distribution<double> u(0.01, 0.49);
    for (int i = 0; i < 50; ++i) {
      const double p = u(rng), pp = u(rng);
      for (unsigned k = 1; k <= 200; ++k) {
        const auto c = tvd::inner_sum_identity_check<double>(k, p, pp);
        REQUIRE(std::fabs(c.sum - c.closed) <= 1e-10 * std::fabs(c.closed));
      }
    }
  }

  TEST_CASE("inner sum at k = 1") {
    const auto c = tvd::inner_sum_identity_check<Rational>(1, R("0.3"), R("0.2"));
    // a' at r = 0 with C(1,0) = 1: beta^0 / mass = 2; alpha = 0.6 so rbar = 0
    CHECK(c.sum == 2);
    CHECK(c.closed == 2);
  }

  TEST_CASE("telescoping step") {
    const Rational p = R("0.37"), pp = R("0.21");
    const Rational alpha = p / (p + pp), beta = pp / (p + pp);
    auto partial = [&](unsigned k, int upto) {
      Rational s = 0;
      for (int r = 0; r <= upto; ++r)
        s += Rational(tvd::binomial(k - 1, r)) * tvd::pow_int(alpha, r) * tvd::pow_int(beta, k - 1 - r);
      return s;
    };
    for (unsigned k = 1; k <= 40; ++k) {
      const unsigned rb = tvd::rbar<Rational>(k, p, pp);
      const Rational single = Rational(tvd::binomial(k - 1, rb)) * tvd::pow_int(alpha, rb) * tvd::pow_int(beta, k - 1 - rb);
      CHECK(partial(k, rb) - partial(k, static_cast<int>(rb) - 1) == single);
      CHECK(Rational(k) / (p + pp) * single == tvd::inner_sum_closed<Rational>(k, p, pp));
    }
  }

  TEST_CASE("decomposition invariants") {
    std::mt19937_64 rng(44);
    for (int i = 0; i < 30; ++i) {
      const Rational p = oracle::random_in(rng, 0, Rational(1, 2)), pp = oracle::random_in(rng, 0, Rational(1, 2));
      const unsigned n = 1 + i;
      const auto d = tvd::decompose_derivative(family(p, pp), n);
      REQUIRE(d.terms.size() == n + 1);
      Rational qs = 0, mean = 0, total = 0;
      for (const auto& t : d.terms) {
        CHECK(t.qk >= 0);
        qs += t.qk;
        mean += t.qk * t.k;
        CHECK(t.gamma >= 0);
        CHECK(t.gamma < 1);
        CHECK(t.inner_sum == t.closed_form);
        CHECK(t.alpha_tilde + t.beta_tilde == 1);
        total += t.qk * t.closed_form;
      }
      CHECK(qs == 1);
      CHECK(mean == n * (p + pp));
      CHECK(d.terms[0].inner_sum == 0);
      CHECK(total == d.derivative);
      CHECK(d.derivative == tvd::derivative_exact(family(p, pp), n));
      CHECK(d.derivative == tvd::derivative_direct(family(p, pp), n));
    }
  }

  TEST_CASE("derivative at n = 1 is one") {
    CHECK(tvd::derivative_exact(family(R("0.3"), R("0.2")), 1) == 1);
    CHECK(tvd::derivative_exact(family(R("1/2"), R("1/2")), 1) == 1);
    CHECK(tvd::derivative_exact(ffamily(0.3, 0.2), 1) == Approx(1.0));
  }

  TEST_CASE("right finite differences") {
    std::mt19937_64 rng(45);
    const Rational h = R("1/1000000");
    for (int i = 0; i < 25; ++i) {
      const Rational p = oracle::random_in(rng, Rational(1, 20), Rational(1, 2), 100);
      const Rational pp = oracle::random_in(rng, Rational(1, 20), Rational(1, 2), 100);
      const unsigned n = 1 + static_cast<unsigned>(rng() % 30);
      const auto fam = family(p, pp);
      const Rational fd = tvd::two_point_distance(fam, Rational(fam.t0() + h), n) / h;
      const Rational d = tvd::derivative_exact(fam, n);
      CHECK(Rational(abs(fd - d)).get_d() <= 1e-4 * d.get_d());
    }
  }

  TEST_CASE("float derivative agrees with rational") {
    std::mt19937_64 rng(46);
    for (int i = 0; i < 50; ++i) {
      const Rational p = oracle::random_in(rng, 0, Rational(1, 2)), pp = oracle::random_in(rng, 0, Rational(1, 2));
      const unsigned n = 1 + static_cast<unsigned>(rng() % 200);
      const double exact = tvd::derivative_exact(family(p, pp), n).get_d();
      const double fl = tvd::derivative_exact(ffamily(p.get_d(), pp.get_d()), n);
      CHECK(fl == Approx(exact).epsilon(1e-10));
      CHECK(tvd::derivative_direct(ffamily(p.get_d(), pp.get_d()), n) == Approx(exact).epsilon(1e-10));
    }
  }

  TEST_CASE("derivative below both bounds") {
    std::mt19937_64 rng(47);
    std::uniform_real_distribution<double> u(0.005, 0.5);
    for (int i = 0; i < 2000; ++i) {
      const double p = u(rng), pp = u(rng);
      const unsigned n = 1 + static_cast<unsigned>(rng() % 400);
      const double d = tvd::derivative_exact(ffamily(p, pp), n);
      REQUIRE(d <= tvd::lemma2_first_bound(p, pp, n));
      REQUIRE(d <= tvd::lemma2_second_bound(p, pp, n));
    }
  }

  TEST_CASE("Jensen step") {
    for (unsigned n : {1u, 2u, 5u, 50u, 200u}) {
      const auto j = tvd::jensen_step_check(ffamily(0.3, 0.2), n);
      CHECK(j.holds());
    }
    const auto full = tvd::jensen_step_check(ffamily(0.6, 0.4), 30);
    CHECK(full.lhs == Approx(full.rhs).epsilon(1e-12));
    CHECK(full.lhs_tilde == Approx(full.rhs_tilde).epsilon(1e-12));
    CHECK(full.holds());
  }

  TEST_CASE("binomial chain links") {
    std::mt19937_64 rng(48);
    for (int i = 0; i < 10; ++i) {
      const Rational alpha = oracle::random_in(rng, 0, 1);
      for (unsigned k = 1; k <= 100; ++k) {
        const auto links = tvd::binom_chain_links(k, alpha);
        REQUIRE(links.rewrite_exact());
        REQUIRE(links.maxpot_link());
        REQUIRE(links.stirling_link());
        REQUIRE(links.final_link());
        REQUIRE(links.ratio_link());
        REQUIRE(links.gamma_predicate);
      }
    }
  }

  TEST_CASE("per-k bounds") {
    std::mt19937_64 rng(49);
    for (int i = 0; i < 10; ++i) {
      const Rational p = oracle::random_in(rng, 0, Rational(1, 2)), pp = oracle::random_in(rng, 0, Rational(1, 2));
      for (unsigned k = 1; k <= 100; ++k) {
        const auto b = tvd::per_k_bounds(k, p, pp);
        REQUIRE(b.below_s());
        REQUIRE(b.below_s_tilde());
      }
    }
    // small k where C(k-1, rbar) is 1 or k - 1
    for (unsigned k = 1; k <= 4; ++k) {
      const auto b = tvd::per_k_bounds(k, R("0.25"), R("0.25"));
      CHECK(b.below_s_tilde());
      const auto c = tvd::per_k_bounds(k, R("0.01"), R("0.49"));
      CHECK(c.below_s_tilde());
    }
  }

  TEST_CASE("family validation") {
    Distribution<Rational> d({R("0.5"), R("0.5"), R("0")});
    CHECK_THROWS_AS(TwoPointFamily<Rational>(d, "z1", "z3"), tvd::Error);
    CHECK_THROWS_AS(TwoPointFamily<Rational>(d, "z1", "z1"), tvd::Error);
    CHECK_THROWS_AS(TwoPointFamily<Rational>(d, "z1", "nope"), tvd::Error);
    TwoPointFamily<Rational> fam(d, "z1", "z2", R("0"));
    CHECK(fam.prob_z1(R("0.1")) == R("0.6"));
    CHECK(fam.prob_z2(R("0.1")) == R("0.4"));
    CHECK(fam.t_min() == R("-0.5"));
    CHECK(fam.t_max() == R("0.5"));
    CHECK(fam.at(R("0.5"))[1] == 0);
    CHECK_THROWS_AS(fam.at(R("0.6")), tvd::Error);
  }
}
