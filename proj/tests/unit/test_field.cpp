#include <cmath>
#include <limits>

#include "doctest.h"
#include "tvd/error.hpp"
#include "tvd/field.hpp"
#include "tvd/log_math.hpp"

using tvd::Rational;

TEST_SUITE("field") {
  TEST_CASE("parsing rationals exactly") {
    CHECK(tvd::parse_number<Rational>("3/10") == Rational(3, 10));
    CHECK(tvd::parse_number<Rational>("0.1") == Rational(1, 10));
    CHECK(tvd::parse_number<Rational>("1e-3") == Rational(1, 1000));
    CHECK(tvd::parse_number<Rational>("-2.5E1") == -25);
    CHECK(tvd::parse_number<Rational>("6/4") == Rational(3, 2));
    CHECK_THROWS_AS(tvd::parse_number<Rational>("abc"), tvd::Error);
    CHECK_THROWS_AS(tvd::parse_number<Rational>("1/0"), tvd::Error);
  }

  TEST_CASE("parsing doubles") {
    CHECK(tvd::parse_number<double>("0.1") == 0.1);
    CHECK(tvd::parse_number<double>("1/4") == 0.25);
    CHECK_THROWS_AS(tvd::parse_number<double>("0.1x"), tvd::Error);
  }

  TEST_CASE("printing") {
    CHECK(tvd::to_string(Rational(11, 100)) == "11/100");
    CHECK(tvd::to_string(Rational(2)) == "2");
    CHECK(tvd::to_string(0.1) == "0.1");
  }

  TEST_CASE("directed conversions bracket the rational") {
    for (const Rational& x : {Rational(1, 10), Rational(1, 3), Rational(2, 7), Rational(-1, 3), Rational(1, 4)}) {
      const double lo = tvd::to_double_down(x), hi = tvd::to_double_up(x), mid = tvd::to_double(x);
      CHECK(Rational(lo) <= x);
      CHECK(Rational(hi) >= x);
      CHECK(lo <= mid);
      CHECK(mid <= hi);
      CHECK(std::nextafter(lo, 2.0) >= hi);
    }
    CHECK(tvd::to_double(Rational(11, 100)) == 0.11);
    CHECK(tvd::to_double_up(Rational(1, 4)) == 0.25);
  }

  TEST_CASE("round_up never goes below") {
    const long double x = 1.0L / 3.0L;
    const double r = tvd::round_up(x);
    CHECK(static_cast<long double>(r) >= x);
    CHECK(r - static_cast<double>(x) < 1e-15);
  }

  TEST_CASE("pow_int and binomial") {
    CHECK(tvd::pow_int(Rational(0), 0) == 1);
    CHECK(tvd::pow_int(0.0, 0) == 1.0);
    CHECK(tvd::pow_int(Rational(2, 3), 3) == Rational(8, 27));
    CHECK(tvd::binomial(10, 3) == 120);
  }

  TEST_CASE("log helpers") {
    CHECK(tvd::xlogy(0.0, 0.0) == 0.0);
    CHECK(tvd::xlogy(2.0, std::log(3.0)) == doctest::Approx(2 * std::log(3.0)));
    CHECK(tvd::scaled_abs_diff_exp(0.0, std::log(0.25), std::log(0.16)) == doctest::Approx(0.09));
    tvd::LogFactorials lf(20);
    CHECK(std::exp(lf.log_binom(10, 3)) == doctest::Approx(120.0));
  }

  TEST_CASE("backend names") {
    CHECK(tvd::parse_backend("rational") == tvd::Backend::Rational);
    CHECK(tvd::parse_backend("float") == tvd::Backend::Float);
    CHECK_THROWS_AS(tvd::parse_backend("quad"), tvd::Error);
  }
}
