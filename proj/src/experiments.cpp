#include "tvd/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "json.hpp"

namespace tvd {

std::size_t Table::column(std::string_view name) const {
  for (std::size_t i = 0; i < columns.size(); ++i)
    if (columns[i] == name) return i;
  fail(Errc::InvalidArgument, "no column '" + std::string(name) + "'");
}

std::string Table::to_csv() const {
  std::ostringstream os;
  os << "# schema=" << schema << '\n';
  for (const auto& [k, v] : metadata) os << "# " << k << '=' << v << '\n';
  for (std::size_t i = 0; i < columns.size(); ++i) os << (i ? "," : "") << columns[i];
  os << '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << to_string(row[i]);
    os << '\n';
  }
  return os.str();
}

std::string Table::to_json() const {
  nlohmann::ordered_json j;
  j["schema"] = schema;
  j["metadata"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : metadata) j["metadata"][k] = v;
  j["columns"] = columns;
  j["rows"] = nlohmann::ordered_json::array();
  for (const auto& row : rows) {
    auto r = nlohmann::ordered_json::array();
    for (double x : row) {
      if (std::isfinite(x)) {
        r.push_back(x);
      } else {
        r.push_back(nullptr);
      }
    }
    j["rows"].push_back(std::move(r));
  }
  return j.dump(2);
}

std::pair<Distribution<double>, Distribution<double>> make_two_point_pair(double pbar, double delta) {
  if (!(pbar > 0 && pbar <= 0.5)) fail(Errc::OutOfRange, "pbar must lie in (0, 1/2]");
  if (!(delta > 0)) fail(Errc::InvalidArgument, "delta must be positive");
  delta = std::min(delta, 1.0 - 2.0 * pbar);
  if (!(delta > 0)) fail(Errc::InvalidArgument, "no two-point pair has min probability 1/2 and delta > 0");
  const double rest = 1.0 - 2.0 * pbar - delta;
  std::vector<std::string> labels{"z1", "z2"};
  std::vector<double> p{pbar + delta, pbar}, q{pbar, pbar + delta};
  if (rest > kEqualityTolerance) {
    labels.push_back("z3");
    p.push_back(rest);
    q.push_back(rest);
  }
  return {Distribution<double>(labels, p), Distribution<double>(labels, q)};
}

Table tightness_probe(double pbar, unsigned n_max, double delta) {
  if (n_max == 0) fail(Errc::InvalidArgument, "n_max must be at least 1");
  const auto [p, q] = make_two_point_pair(pbar, delta);
  const double actual_delta = variational_distance(p, q);
  const double mass = p[0] + p[1];

  Table t;
  t.schema = "tightness_probe/v1";
  t.columns = {"n", "distance", "lemma1_first", "quotient", "running_max", "in_regime"};
  t.metadata = {{"pbar", to_string(pbar)},
                {"delta_1", to_string(actual_delta)},
                {"pair", "P=(pbar+delta,pbar,rest) Q=(pbar,pbar+delta,rest)"},
                {"regime", "distance<" + to_string(kTightnessRegime)}};
  double running = 0.0;
  for (unsigned n = 1; n <= n_max; ++n) {
    const double d = two_point_block_distance<double>(mass, p[0], q[0], n);
    const double bound = lemma1_first_bound(actual_delta, pbar, n);
    const double quotient = d / bound;
    running = std::max(running, quotient);
    t.rows.push_back({static_cast<double>(n), d, bound, quotient, running, d < kTightnessRegime ? 1.0 : 0.0});
  }
  return t;
}

Table constant_probe(unsigned n_max) {
  if (n_max == 0) fail(Errc::InvalidArgument, "n_max must be at least 1");
  static constexpr double kPbars[] = {0.05, 0.1, 0.2, 0.3, 0.4, 0.45, 0.49};
  static constexpr double kDeltas[] = {0.1, 0.01, 1e-3, 1e-4};

  Table t;
  t.schema = "constant_probe/v1";
  t.columns = {"pbar", "delta_1", "n", "distance", "c_required"};
  double sup = 0.0;
  std::string argmax;
  for (double pbar : kPbars) {
    for (double delta : kDeltas) {
      if (2.0 * pbar + delta > 1.0) continue;
      const auto [p, q] = make_two_point_pair(pbar, delta);
      const double mass = p[0] + p[1];
      for (unsigned n = 1; n <= n_max; ++n) {
        const double d = two_point_block_distance<double>(mass, p[0], q[0], n);
        const double ratio = d / delta;
        const double c = pbar * ratio * ratio / n;
        if (c > sup) {
          sup = c;
          argmax = "pbar=" + to_string(pbar) + ",delta=" + to_string(delta) + ",n=" + std::to_string(n);
        }
        t.rows.push_back({pbar, delta, static_cast<double>(n), d, c});
      }
    }
  }
  t.metadata = {{"sup_c_required", to_string(sup)}, {"argmax", argmax}, {"bound_constant", "0.5"}};
  return t;
}

namespace detail {

PathIntegral path_integral_upper_sum(double mass, double x_a, double x_b, unsigned n, unsigned grid) {
  PathIntegral out;
  std::vector<double> nodes;
  nodes.reserve(grid + 2);
  const double width = x_b - x_a;
  for (unsigned i = 0; i <= grid; ++i) nodes.push_back(i == grid ? x_b : x_a + width * i / grid);
  const double mid = mass / 2.0;
  if (mid > x_a && mid < x_b) nodes.push_back(mid);
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());

  auto f = [&](double x) { return lemma2_first_bound(x, mass - x, n); };
  long double integral = 0;
  double f_left = f(nodes.front());
  for (std::size_t i = 1; i < nodes.size(); ++i) {
    const double f_right = f(nodes[i]);
    integral += static_cast<long double>(nodes[i] - nodes[i - 1]) * std::max(f_left, f_right);
    f_left = f_right;
  }
  out.integral = round_up(integral);
  out.cells = static_cast<unsigned>(nodes.size() - 1);

  out.pbar = std::min({x_a, mass - x_a, x_b, mass - x_b});
  const long double pi = std::numbers::pi_v<long double>;
  const long double pb = out.pbar;
  out.lemma1_rhs = round_up(static_cast<long double>(width) / std::sqrt(2.0L * pi) * std::sqrt(2.0L / pb) *
                            std::sqrt(n + 1.0L / pb));
  return out;
}

}  // namespace detail

}  // namespace tvd
