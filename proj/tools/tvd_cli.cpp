// tvd: command-line front end over libtvd.
//
//   tvd dist      --input pair.json --n 10 [--engine auto|brute|types|twopoint|mc]
//   tvd mc        --input pair.json --n 10 --samples 100000 --seed 7
//   tvd bound     --input pair.json --n 10
//   tvd chain     --input pair.json [--n 4]
//   tvd sweep     --input pair.json --n-max 100 [--out csv|json]
//   tvd tightness --pbar 0.2 --n-max 200
//   tvd constant  --n-max 200
//   tvd pathint   --input family.json --from 0.2 --to 0.3 --n 50 [--grid 64]
//
// Pair documents are {"p": <distribution>, "q": <distribution>}; a family
// document is {"base": <distribution>, "z1": "a", "z2": "b", "t0": "..."}.
// Instead of --input, --p/--q take comma-separated probabilities.
//
// Exit codes: 0 success, 1 validation or usage error, 2 bound inapplicable
// (pbar = 0).

#include <charconv>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "tvd/tvd.h"

namespace {

using Json = nlohmann::json;

constexpr int kExitError = 1;
constexpr int kExitInapplicable = 2;

struct Failure {
  tvd_status status;
  std::string message;
};

void check(tvd_status s) {
  if (s != TVD_OK) throw Failure{s, tvd_last_error()};
}

[[noreturn]] void usage_error(const std::string& msg) { throw Failure{TVD_ERR_INVALID_ARGUMENT, msg}; }

struct DistDeleter {
  void operator()(tvd_distribution* d) const { tvd_distribution_free(d); }
};
struct FamilyDeleter {
  void operator()(tvd_family* f) const { tvd_family_free(f); }
};
struct ChainDeleter {
  void operator()(tvd_chain* c) const { tvd_chain_free(c); }
};
struct TableDeleter {
  void operator()(tvd_table* t) const { tvd_table_free(t); }
};
using DistPtr = std::unique_ptr<tvd_distribution, DistDeleter>;
using FamilyPtr = std::unique_ptr<tvd_family, FamilyDeleter>;
using ChainPtr = std::unique_ptr<tvd_chain, ChainDeleter>;
using TablePtr = std::unique_ptr<tvd_table, TableDeleter>;

std::string take(char* s) {
  std::string out = s ? s : "";
  tvd_string_free(s);
  return out;
}

struct Options {
  std::string input;
  std::string p_list, q_list;
  unsigned n = 1;
  unsigned n_max = 100;
  std::string backend = "rational";
  std::string out = "json";
  std::string engine = "auto";
  std::uint64_t seed = 1;
  std::uint64_t samples = 100000;
  unsigned shards = 1;
  double pbar = 0.25;
  double delta = 1e-3;
  std::string from, to;
  unsigned grid = 64;
  std::uint64_t max_outcomes = 0, max_type_classes = 0;
};

tvd_backend backend_of(const Options& o) {
  if (o.backend == "rational" || o.backend == "exact") return TVD_BACKEND_RATIONAL;
  if (o.backend == "float" || o.backend == "float64") return TVD_BACKEND_FLOAT;
  usage_error("unknown backend '" + o.backend + "'");
}

tvd_limits limits_of(const Options& o) {
  tvd_limits l;
  tvd_limits_default(&l);
  if (o.max_outcomes) l.max_outcomes = o.max_outcomes;
  if (o.max_type_classes) l.max_type_classes = o.max_type_classes;
  return l;
}

Json read_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) usage_error("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return Json::parse(ss.str());
  } catch (const Json::parse_error& e) {
    throw Failure{TVD_ERR_PARSE, path + ": " + e.what()};
  }
}

DistPtr dist_from_json(const Json& j, tvd_backend backend) {
  tvd_distribution* d = nullptr;
  check(tvd_distribution_from_json(j.dump().c_str(), backend, &d));
  return DistPtr(d);
}

DistPtr dist_from_list(const std::string& list, tvd_backend backend) {
  std::vector<std::string> parts;
  std::stringstream ss(list);
  for (std::string item; std::getline(ss, item, ',');) parts.push_back(item);
  std::vector<const char*> ptrs;
  for (const auto& s : parts) ptrs.push_back(s.c_str());
  tvd_distribution* d = nullptr;
  check(tvd_distribution_create(nullptr, ptrs.data(), ptrs.size(), backend, &d));
  return DistPtr(d);
}

std::pair<DistPtr, DistPtr> load_pair(const Options& o) {
  const auto backend = backend_of(o);
  if (!o.input.empty()) {
    const Json j = read_input(o.input);
    if (!j.is_object() || !j.contains("p") || !j.contains("q")) usage_error("pair document needs \"p\" and \"q\"");
    return {dist_from_json(j["p"], backend), dist_from_json(j["q"], backend)};
  }
  if (o.p_list.empty() || o.q_list.empty()) usage_error("give --input or both --p and --q");
  return {dist_from_list(o.p_list, backend), dist_from_list(o.q_list, backend)};
}

std::string num(double x) {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

std::string number_text(const Json& j) { return j.is_string() ? j.get<std::string>() : j.dump(); }

void print_json(const Json& j) { std::cout << j.dump(2) << '\n'; }

void print_table(tvd_table* t, const Options& o) {
  char* s = nullptr;
  if (o.out == "csv") {
    check(tvd_table_to_csv(t, &s));
    std::cout << take(s);
  } else {
    check(tvd_table_to_json(t, &s));
    std::cout << take(s) << '\n';
  }
}

const char* engine_text(tvd_engine e) {
  switch (e) {
    case TVD_ENGINE_BRUTE_FORCE: return "brute";
    case TVD_ENGINE_TYPE_CLASS: return "types";
    case TVD_ENGINE_TWO_POINT: return "twopoint";
    default: return "auto";
  }
}

int run_mc(const Options& o) {
  auto [p, q] = load_pair(o);
  tvd_mc_estimate e{};
  check(tvd_mc_distance(p.get(), q.get(), o.n, o.samples, o.seed, o.shards, &e));
  Json j{{"n", o.n},     {"engine", "mc"},       {"mean", e.mean},   {"half_width_95", e.half_width_95},
         {"samples", e.samples}, {"seed", e.seed}, {"shards", e.shards}};
  if (o.out == "csv") {
    std::cout << "n,mean,half_width_95,samples,seed,shards\n"
              << o.n << ',' << num(e.mean) << ',' << num(e.half_width_95) << ',' << e.samples << ',' << e.seed << ','
              << e.shards << '\n';
  } else {
    print_json(j);
  }
  return 0;
}

int run_dist(const Options& o) {
  if (o.engine == "mc") return run_mc(o);
  tvd_engine engine;
  if (o.engine == "auto") engine = TVD_ENGINE_AUTO;
  else if (o.engine == "brute") engine = TVD_ENGINE_BRUTE_FORCE;
  else if (o.engine == "types") engine = TVD_ENGINE_TYPE_CLASS;
  else if (o.engine == "twopoint") engine = TVD_ENGINE_TWO_POINT;
  else usage_error("unknown engine '" + o.engine + "'");

  auto [p, q] = load_pair(o);
  const auto limits = limits_of(o);
  double value = 0;
  char* exact = nullptr;
  tvd_engine used = engine;
  check(tvd_product_distance(p.get(), q.get(), o.n, engine, &limits, &value, &exact, &used));
  const std::string exact_text = take(exact);
  if (o.out == "csv") {
    std::cout << "n,engine,distance,exact\n" << o.n << ',' << engine_text(used) << ',' << num(value) << ',' << exact_text
              << '\n';
  } else {
    print_json({{"n", o.n}, {"engine", engine_text(used)}, {"distance", value}, {"exact", exact_text}});
  }
  return 0;
}

int run_bound(const Options& o) {
  auto [p, q] = load_pair(o);
  const auto limits = limits_of(o);
  char* s = nullptr;
  int applicable = 0;
  check(tvd_bound_report_json(p.get(), q.get(), o.n, &limits, &s, &applicable));
  const Json report = Json::parse(take(s));
  print_json(report);
  if (!applicable && !report["diff_set"].empty()) {
    std::cerr << "tvd: pbar = 0, the square-root bounds do not apply\n";
    return kExitInapplicable;
  }
  return 0;
}

int run_chain(const Options& o, bool with_assembly) {
  auto [p, q] = load_pair(o);
  char* s = nullptr;
  if (with_assembly) {
    const auto limits = limits_of(o);
    check(tvd_chain_assembly_json(p.get(), q.get(), o.n, &limits, &s));
  } else {
    tvd_chain* c = nullptr;
    check(tvd_chain_build(p.get(), q.get(), &c));
    ChainPtr chain(c);
    check(tvd_chain_to_json(chain.get(), &s));
  }
  std::cout << take(s) << '\n';
  return 0;
}

int run_sweep(const Options& o) {
  auto [p, q] = load_pair(o);
  const auto limits = limits_of(o);
  tvd_table* t = nullptr;
  check(tvd_growth_sweep(p.get(), q.get(), o.n_max, &limits, &t));
  TablePtr table(t);
  print_table(table.get(), o);
  return 0;
}

int run_tightness(const Options& o) {
  tvd_table* t = nullptr;
  check(tvd_tightness_probe(o.pbar, o.n_max, o.delta, &t));
  TablePtr table(t);
  print_table(table.get(), o);
  return 0;
}

int run_constant(const Options& o) {
  tvd_table* t = nullptr;
  check(tvd_constant_probe(o.n_max, &t));
  TablePtr table(t);
  print_table(table.get(), o);
  return 0;
}

int run_pathint(const Options& o) {
  if (o.input.empty()) usage_error("pathint needs --input with a family document");
  const Json j = read_input(o.input);
  if (!j.is_object() || !j.contains("base") || !j.contains("z1") || !j.contains("z2"))
    usage_error("family document needs \"base\", \"z1\" and \"z2\"");
  const auto base = dist_from_json(j["base"], backend_of(o));
  std::optional<std::string> t0;
  if (j.contains("t0")) t0 = number_text(j["t0"]);
  std::string from = o.from, to = o.to;
  if (from.empty() && j.contains("from")) from = number_text(j["from"]);
  if (to.empty() && j.contains("to")) to = number_text(j["to"]);
  if (from.empty() || to.empty()) usage_error("pathint needs --from and --to");

  tvd_family* f = nullptr;
  check(tvd_family_create(base.get(), j["z1"].get<std::string>().c_str(), j["z2"].get<std::string>().c_str(),
                          t0 ? t0->c_str() : nullptr, &f));
  FamilyPtr family(f);
  tvd_path_integral_result r{};
  check(tvd_path_integral(family.get(), from.c_str(), to.c_str(), o.n, o.grid, &r));
  const bool holds = r.distance <= r.integral && r.distance <= r.lemma1_rhs;
  if (o.out == "csv") {
    std::cout << "n,grid,distance,integral,lemma1_rhs,pbar,cells,holds\n"
              << o.n << ',' << o.grid << ',' << num(r.distance) << ',' << num(r.integral) << ',' << num(r.lemma1_rhs) << ','
              << num(r.pbar) << ',' << r.cells << ',' << (holds ? 1 : 0) << '\n';
  } else {
    print_json({{"n", o.n},
                {"grid", o.grid},
                {"distance", r.distance},
                {"integral", r.integral},
                {"lemma1_rhs", r.lemma1_rhs},
                {"pbar", r.pbar},
                {"cells", r.cells},
                {"holds", holds}});
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Variational distance between product distributions"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(tvd_version()));
  Options o;

  auto pair_flags = [&](CLI::App* sub) {
    sub->add_option("--input", o.input, "JSON document with \"p\" and \"q\"");
    sub->add_option("--p", o.p_list, "comma-separated probabilities of P");
    sub->add_option("--q", o.q_list, "comma-separated probabilities of Q");
  };
  auto common = [&](CLI::App* sub) {
    sub->add_option("--backend", o.backend, "rational|float")->capture_default_str();
    sub->add_option("--out", o.out, "json|csv")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
    sub->add_option("--seed", o.seed, "random seed")->capture_default_str();
  };
  auto limit_flags = [&](CLI::App* sub) {
    sub->add_option("--max-outcomes", o.max_outcomes, "brute-force work guard");
    sub->add_option("--max-type-classes", o.max_type_classes, "type-class work guard");
  };

  auto* dist = app.add_subcommand("dist", "exact or Monte Carlo distance of P^n and Q^n");
  pair_flags(dist);
  common(dist);
  limit_flags(dist);
  dist->add_option("--n", o.n, "number of coordinates")->required();
  dist->add_option("--engine", o.engine, "auto|brute|types|twopoint|mc")->capture_default_str();
  dist->add_option("--samples", o.samples, "Monte Carlo samples")->capture_default_str();
  dist->add_option("--shards", o.shards, "Monte Carlo shards")->capture_default_str();

  auto* mc = app.add_subcommand("mc", "Monte Carlo estimate with a 95% interval");
  pair_flags(mc);
  common(mc);
  mc->add_option("--n", o.n, "number of coordinates")->required();
  mc->add_option("--samples", o.samples, "samples")->capture_default_str();
  mc->add_option("--shards", o.shards, "shards")->capture_default_str();

  auto* bound = app.add_subcommand("bound", "all closed-form bounds as JSON");
  pair_flags(bound);
  common(bound);
  limit_flags(bound);
  bound->add_option("--n", o.n, "number of coordinates")->required();

  auto* chain = app.add_subcommand("chain", "two-point chain from P to Q as JSON");
  pair_flags(chain);
  common(chain);
  limit_flags(chain);
  auto* chain_n = chain->add_option("--n", o.n, "also assemble the per-step bounds for P^n, Q^n");

  auto* sweep = app.add_subcommand("sweep", "distance and bounds for n = 1..n-max");
  pair_flags(sweep);
  common(sweep);
  limit_flags(sweep);
  sweep->add_option("--n-max", o.n_max, "largest n")->capture_default_str();

  auto* tight = app.add_subcommand("tightness", "quotient of distance and the first square-root bound");
  common(tight);
  tight->add_option("--pbar", o.pbar, "minimum probability on the difference set")->capture_default_str();
  tight->add_option("--delta", o.delta, "single-letter distance")->capture_default_str();
  tight->add_option("--n-max", o.n_max, "largest n")->capture_default_str();

  auto* constant = app.add_subcommand("constant", "smallest constant compatible with each observed distance");
  common(constant);
  constant->add_option("--n-max", o.n_max, "largest n")->capture_default_str();

  auto* pathint = app.add_subcommand("pathint", "path integral of the derivative bound along a family");
  common(pathint);
  pathint->add_option("--input", o.input, "family document")->required();
  pathint->add_option("--from", o.from, "start parameter");
  pathint->add_option("--to", o.to, "end parameter");
  pathint->add_option("--n", o.n, "number of coordinates")->required();
  pathint->add_option("--grid", o.grid, "Riemann grid cells")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kExitError;
  }

  try {
    if (*dist) return run_dist(o);
    if (*mc) return run_mc(o);
    if (*bound) return run_bound(o);
    if (*chain) return run_chain(o, chain_n->count() > 0);
    if (*sweep) return run_sweep(o);
    if (*tight) return run_tightness(o);
    if (*constant) return run_constant(o);
    if (*pathint) return run_pathint(o);
  } catch (const Failure& f) {
    std::cerr << "tvd: " << tvd_status_string(f.status) << ": " << f.message << '\n';
    return f.status == TVD_ERR_PBAR_NOT_POSITIVE ? kExitInapplicable : kExitError;
  } catch (const std::exception& e) {
    std::cerr << "tvd: " << e.what() << '\n';
    return kExitError;
  }
  return kExitError;
}
