#include <cmath>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "tvd/experiments.hpp"

using tvd::Distribution;
using tvd::Rational;

namespace {

Rational R(const char* s) { return tvd::parse_number<Rational>(s); }

}  // namespace

TEST_SUITE("experiments") {
  TEST_CASE("growth sweep on the near-linear example") {
    Distribution<Rational> p({R("1"), R("0")}), q({R("0.999"), R("0.001")});
    const auto t = tvd::growth_sweep(p, q, 100);
    REQUIRE(t.rows.size() == 100);
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
      CHECK(t.at(i, "n") == i + 1);
      CHECK(t.at(i, "ratio_linear") >= 0.95);
      CHECK(t.at(i, "dominance") == 1.0);
      CHECK(std::isnan(t.at(i, "lemma1_first")));
    }
    CHECK(t.schema == "growth_sweep/v1");
  }

  TEST_CASE("growth sweep for P = Q") {
    Distribution<Rational> p({R("0.3"), R("0.7")});
    const auto t = tvd::growth_sweep(p, p, 10);
    for (std::size_t i = 0; i < t.rows.size(); ++i) CHECK(t.at(i, "distance") == 0.0);
  }

  TEST_CASE("growth sweep with the square-root gate") {
    Distribution<Rational> p({R("0.5"), R("0.3"), R("0.2")}), q({R("0.4"), R("0.3"), R("0.3")});
    const auto t = tvd::growth_sweep(p, q, 60);
    double prev = 0;
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
      CHECK(t.at(i, "dominance") == 1.0);
      CHECK(t.at(i, "ratio_first") <= 1.0);
      CHECK(t.at(i, "ratio_second") <= 1.0);
      CHECK(t.at(i, "distance") >= prev);
      prev = t.at(i, "distance");
    }
    Distribution<double> fp({0.5, 0.2, 0.2, 0.1}), fq({0.3, 0.3, 0.2, 0.2});
    const auto f = tvd::growth_sweep(fp, fq, 30);
    for (std::size_t i = 0; i < f.rows.size(); ++i) CHECK(f.at(i, "dominance") == 1.0);
  }

  TEST_CASE("two-point pair construction") {
    const auto [p, q] = tvd::make_two_point_pair(0.2, 0.01);
    CHECK(p.size() == 3);
    CHECK(tvd::variational_distance(p, q) == doctest::Approx(0.01));
    CHECK(*tvd::diff_profile(p, q).min_diff_prob == doctest::Approx(0.2));
    const auto [a, b] = tvd::make_two_point_pair(0.45, 0.5);
    CHECK(tvd::variational_distance(a, b) == doctest::Approx(0.1));
    CHECK_THROWS_AS(tvd::make_two_point_pair(0.5, 0.01), tvd::Error);
    CHECK_THROWS_AS(tvd::make_two_point_pair(0.0, 0.01), tvd::Error);
  }

  TEST_CASE("tightness probe") {
    const auto t = tvd::tightness_probe(0.2, 400);
    REQUIRE(t.rows.size() == 400);
    double prev_running = 0;
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
      CHECK(t.at(i, "quotient") <= 1.0);
      CHECK(t.at(i, "running_max") >= prev_running);
      prev_running = t.at(i, "running_max");
    }
    CHECK(t.at(t.rows.size() - 1, "running_max") >= t.at(0, "quotient"));
    bool has_regime = false;
    for (const auto& [k, v] : t.metadata) has_regime |= k == "regime";
    CHECK(has_regime);
  }

  TEST_CASE("constant probe") {
    const auto t = tvd::constant_probe(200);
    double sup = 0;
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
      CHECK(t.at(i, "c_required") <= 0.5);
      sup = std::max(sup, t.at(i, "c_required"));
    }
    CHECK(sup > 0.0);
    CHECK(t.metadata.front().first == "sup_c_required");
  }

  TEST_CASE("CSV and JSON emission") {
    const auto t = tvd::tightness_probe(0.3, 5);
    const std::string csv = t.to_csv();
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);
    CHECK(line == "# schema=tightness_probe/v1");
    std::size_t data = 0, header = 0;
    while (std::getline(in, line)) {
      if (line.rfind("#", 0) == 0) continue;
      if (line.rfind("n,", 0) == 0) {
        ++header;
        continue;
      }
      ++data;
      CHECK(std::count(line.begin(), line.end(), ',') == 5);
    }
    CHECK(header == 1);
    CHECK(data == 5);
    const auto j = nlohmann::json::parse(t.to_json());
    CHECK(j["schema"] == "tightness_probe/v1");
    CHECK(j["rows"].size() == 5);
    CHECK(t.to_csv() == csv);
  }

  TEST_CASE("path integral") {
    Distribution<Rational> base({R("0.3"), R("0.2"), R("0.5")});
    tvd::TwoPointFamily<Rational> fam(base, "z1", "z2");
    const auto zero = tvd::path_integral_check(fam, R("0.3"), R("0.3"), 10, 64);
    CHECK(zero.distance == 0.0);
    CHECK(zero.integral == 0.0);

    const auto a = tvd::path_integral_check(fam, R("0.15"), R("0.4"), 40, 64);
    const auto b = tvd::path_integral_check(fam, R("0.15"), R("0.4"), 40, 1024);
    CHECK(a.holds());
    CHECK(b.holds());
    CHECK(a.integral >= b.integral);
    CHECK(b.integral >= b.distance);
    CHECK(a.pbar == doctest::Approx(0.1));

    CHECK_THROWS_AS(tvd::path_integral_check(fam, R("0"), R("0.3"), 10, 64), tvd::Error);
    CHECK_THROWS_AS(tvd::path_integral_check(fam, R("0.1"), R("0.3"), 10, 1), tvd::Error);
  }
}
