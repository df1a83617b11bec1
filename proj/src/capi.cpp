#include "tvd/tvd.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>
#include <variant>

#include "tvd/bounds.hpp"
#include "tvd/chain.hpp"
#include "tvd/derivative.hpp"
#include "tvd/exact_engine.hpp"
#include "tvd/experiments.hpp"
#include "tvd/json_io.hpp"
#include "tvd/sampling.hpp"
#include "tvd/two_point.hpp"

struct tvd_distribution {
  std::variant<tvd::Distribution<tvd::Rational>, tvd::Distribution<double>> d;
};

struct tvd_family {
  std::variant<tvd::TwoPointFamily<tvd::Rational>, tvd::TwoPointFamily<double>> f;
};

struct tvd_chain {
  std::variant<tvd::ChainDecomposition<tvd::Rational>, tvd::ChainDecomposition<double>> c;
};

struct tvd_table {
  tvd::Table t;
};

namespace {

thread_local std::string g_last_error;

struct NullPointer {};

tvd_status status_of(tvd::Errc e) {
  switch (e) {
    case tvd::Errc::NegativeProbability: return TVD_ERR_NEGATIVE_PROBABILITY;
    case tvd::Errc::SumNotOne: return TVD_ERR_SUM_NOT_ONE;
    case tvd::Errc::DuplicateLabel: return TVD_ERR_DUPLICATE_LABEL;
    case tvd::Errc::TooLarge: return TVD_ERR_TOO_LARGE;
    case tvd::Errc::NotTwoPoint: return TVD_ERR_NOT_TWO_POINT;
    case tvd::Errc::PbarNotPositive: return TVD_ERR_PBAR_NOT_POSITIVE;
    case tvd::Errc::NonpositiveMass: return TVD_ERR_NONPOSITIVE_MASS;
    case tvd::Errc::OutOfRange: return TVD_ERR_OUT_OF_RANGE;
    case tvd::Errc::InvalidArgument: return TVD_ERR_INVALID_ARGUMENT;
    case tvd::Errc::Parse: return TVD_ERR_PARSE;
  }
  return TVD_ERR_INTERNAL;
}

template <class Fn>
tvd_status guard(Fn&& fn) noexcept {
  try {
    fn();
    return TVD_OK;
  } catch (const tvd::Error& e) {
    g_last_error = e.what();
    return status_of(e.code());
  } catch (const NullPointer&) {
    g_last_error = "null pointer argument";
    return TVD_ERR_NULL_POINTER;
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return TVD_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return TVD_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown exception";
    return TVD_ERR_INTERNAL;
  }
}

template <class... Ts>
void need(const Ts*... ptrs) {
  if (((ptrs == nullptr) || ...)) throw NullPointer{};
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

tvd::EngineLimits limits_of(const tvd_limits* l) {
  tvd::EngineLimits out;
  if (l) {
    out.max_outcomes = l->max_outcomes;
    out.max_type_classes = l->max_type_classes;
  }
  return out;
}

tvd::Engine engine_of(tvd_engine e) {
  switch (e) {
    case TVD_ENGINE_AUTO: return tvd::Engine::Auto;
    case TVD_ENGINE_BRUTE_FORCE: return tvd::Engine::BruteForce;
    case TVD_ENGINE_TYPE_CLASS: return tvd::Engine::TypeClass;
    case TVD_ENGINE_TWO_POINT: return tvd::Engine::TwoPoint;
  }
  tvd::fail(tvd::Errc::InvalidArgument, "unknown engine");
}

tvd_engine engine_to_c(tvd::Engine e) {
  switch (e) {
    case tvd::Engine::Auto: return TVD_ENGINE_AUTO;
    case tvd::Engine::BruteForce: return TVD_ENGINE_BRUTE_FORCE;
    case tvd::Engine::TypeClass: return TVD_ENGINE_TYPE_CLASS;
    case tvd::Engine::TwoPoint: return TVD_ENGINE_TWO_POINT;
  }
  return TVD_ENGINE_AUTO;
}

tvd_backend backend_of(const tvd_distribution* d) {
  return d->d.index() == 0 ? TVD_BACKEND_RATIONAL : TVD_BACKEND_FLOAT;
}

// Calls fn(P, Q) with both sides in the same field.
template <class Fn>
void with_pair(const tvd_distribution* p, const tvd_distribution* q, Fn&& fn) {
  need(p, q);
  if (p->d.index() != q->d.index()) tvd::fail(tvd::Errc::InvalidArgument, "distributions use different backends");
  std::visit(
      [&](const auto& a) {
        using D = std::decay_t<decltype(a)>;
        fn(a, std::get<D>(q->d));
      },
      p->d);
}

template <class F>
void write_value(const F& x, double* value, char** exact) {
  if (value) *value = tvd::to_double(x);
  if (exact) *exact = dup_string(tvd::to_string(x));
}

}  // namespace

extern "C" {

const char* tvd_version(void) { return "1.0.0"; }

const char* tvd_status_string(tvd_status status) {
  switch (status) {
    case TVD_OK: return "ok";
    case TVD_ERR_NEGATIVE_PROBABILITY: return "negative probability";
    case TVD_ERR_SUM_NOT_ONE: return "probabilities do not sum to one";
    case TVD_ERR_DUPLICATE_LABEL: return "duplicate label";
    case TVD_ERR_TOO_LARGE: return "problem too large for the exact engine";
    case TVD_ERR_NOT_TWO_POINT: return "pair does not differ at exactly two labels";
    case TVD_ERR_PBAR_NOT_POSITIVE: return "minimum probability on the difference set is zero";
    case TVD_ERR_NONPOSITIVE_MASS: return "nonpositive mass";
    case TVD_ERR_OUT_OF_RANGE: return "argument out of range";
    case TVD_ERR_INVALID_ARGUMENT: return "invalid argument";
    case TVD_ERR_PARSE: return "parse error";
    case TVD_ERR_NULL_POINTER: return "null pointer";
    case TVD_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* tvd_last_error(void) { return g_last_error.c_str(); }

void tvd_string_free(char* s) { std::free(s); }

void tvd_limits_default(tvd_limits* out) {
  if (!out) return;
  const tvd::EngineLimits l;
  out->max_outcomes = l.max_outcomes;
  out->max_type_classes = l.max_type_classes;
}

// ---- distributions

tvd_status tvd_distribution_from_json(const char* json, tvd_backend backend, tvd_distribution** out) {
  return guard([&] {
    need(json, out);
    const auto j = tvd::parse_json(json);
    if (backend == TVD_BACKEND_RATIONAL) {
      *out = new tvd_distribution{tvd::distribution_from_json<tvd::Rational>(j)};
    } else {
      *out = new tvd_distribution{tvd::distribution_from_json<double>(j)};
    }
  });
}

tvd_status tvd_distribution_create(const char* const* labels, const char* const* probs, size_t size,
                                   tvd_backend backend, tvd_distribution** out) {
  return guard([&] {
    need(probs, out);
    auto build = [&]<class F>(F) {
      std::vector<F> values;
      for (size_t i = 0; i < size; ++i) {
        need(probs[i]);
        values.push_back(tvd::parse_number<F>(probs[i]));
      }
      std::vector<std::string> names = tvd::default_labels(size);
      if (labels)
        for (size_t i = 0; i < size; ++i) {
          need(labels[i]);
          names[i] = labels[i];
        }
      return tvd::Distribution<F>(std::move(names), std::move(values));
    };
    if (backend == TVD_BACKEND_RATIONAL) {
      *out = new tvd_distribution{build(tvd::Rational())};
    } else {
      *out = new tvd_distribution{build(0.0)};
    }
  });
}

tvd_status tvd_distribution_create_f64(const char* const* labels, const double* probs, size_t size,
                                       tvd_distribution** out) {
  return guard([&] {
    need(probs, out);
    std::vector<std::string> names = tvd::default_labels(size);
    if (labels)
      for (size_t i = 0; i < size; ++i) {
        need(labels[i]);
        names[i] = labels[i];
      }
    *out = new tvd_distribution{tvd::Distribution<double>(std::move(names), std::vector<double>(probs, probs + size))};
  });
}

void tvd_distribution_free(tvd_distribution* d) { delete d; }

size_t tvd_distribution_size(const tvd_distribution* d) {
  if (!d) return 0;
  return std::visit([](const auto& x) { return x.size(); }, d->d);
}

tvd_backend tvd_distribution_backend(const tvd_distribution* d) {
  return d ? backend_of(d) : TVD_BACKEND_RATIONAL;
}

tvd_status tvd_distribution_to_json(const tvd_distribution* d, char** out) {
  return guard([&] {
    need(d, out);
    *out = dup_string(std::visit([](const auto& x) { return tvd::distribution_to_json(x).dump(); }, d->d));
  });
}

// ---- single-letter distance

tvd_status tvd_variational_distance(const tvd_distribution* p, const tvd_distribution* q, double* value,
                                    char** exact) {
  return guard([&] {
    with_pair(p, q, [&](const auto& a, const auto& b) { write_value(tvd::variational_distance(a, b), value, exact); });
  });
}

tvd_status tvd_diff_profile_json(const tvd_distribution* p, const tvd_distribution* q, char** out) {
  return guard([&] {
    need(out);
    with_pair(p, q, [&](const auto& a, const auto& b) {
      const auto profile = tvd::diff_profile(a, b);
      tvd::Json j;
      j["diff_set"] = profile.diff_set;
      j["pbar"] = profile.min_diff_prob ? tvd::Json(tvd::to_string(*profile.min_diff_prob)) : tvd::Json(nullptr);
      *out = dup_string(j.dump());
    });
  });
}

tvd_status tvd_triangle_check(const tvd_distribution* p, const tvd_distribution* p_mid, const tvd_distribution* q,
                              int* holds) {
  return guard([&] {
    need(p_mid, holds);
    with_pair(p, q, [&](const auto& a, const auto& b) {
      using D = std::decay_t<decltype(a)>;
      if (p_mid->d.index() != p->d.index())
        tvd::fail(tvd::Errc::InvalidArgument, "distributions use different backends");
      *holds = tvd::triangle_check(a, std::get<D>(p_mid->d), b) ? 1 : 0;
    });
  });
}

// ---- product distance

tvd_status tvd_product_distance(const tvd_distribution* p, const tvd_distribution* q, unsigned n, tvd_engine engine,
                                const tvd_limits* limits, double* value, char** exact, tvd_engine* used) {
  return guard([&] {
    with_pair(p, q, [&](const auto& a, const auto& b) {
      using D = std::decay_t<decltype(a)>;
      using F = typename D::value_type;
      const auto r = tvd::product_distance(tvd::ProductQuery<F>(a, b, n), engine_of(engine), limits_of(limits));
      write_value(r.value, value, exact);
      if (used) *used = engine_to_c(r.engine);
    });
  });
}

tvd_status tvd_mc_distance(const tvd_distribution* p, const tvd_distribution* q, unsigned n, uint64_t samples,
                           uint64_t seed, unsigned shards, tvd_mc_estimate* out) {
  return guard([&] {
    need(out);
    with_pair(p, q, [&](const auto& a, const auto& b) {
      using F = typename std::decay_t<decltype(a)>::value_type;
      const auto e = tvd::mc_distance(tvd::ProductQuery<F>(a, b, n), samples, seed, shards);
      *out = {e.mean, e.half_width_95, e.samples, e.seed, e.shards};
    });
  });
}

// ---- bounds

tvd_status tvd_linear_bound(double delta, unsigned n, double* out, int* capped) {
  return guard([&] {
    need(out);
    const auto b = tvd::linear_bound(delta, n);
    *out = b.value;
    if (capped) *capped = b.capped ? 1 : 0;
  });
}

tvd_status tvd_lemma1_first_bound(double delta, double pbar, unsigned n, double* out) {
  return guard([&] {
    need(out);
    *out = tvd::lemma1_first_bound(delta, pbar, n);
  });
}

tvd_status tvd_lemma1_second_bound(double delta, double pbar, unsigned n, double* out) {
  return guard([&] {
    need(out);
    *out = tvd::lemma1_second_bound(delta, pbar, n);
  });
}

tvd_status tvd_lemma2_first_bound(double p, double p_prime, unsigned n, double* out) {
  return guard([&] {
    need(out);
    *out = tvd::lemma2_first_bound(p, p_prime, n);
  });
}

tvd_status tvd_lemma2_second_bound(double p, double p_prime, unsigned n, double* out) {
  return guard([&] {
    need(out);
    *out = tvd::lemma2_second_bound(p, p_prime, n);
  });
}

tvd_status tvd_s_k(double p, double p_prime, double k, double* out) {
  return guard([&] {
    need(out);
    *out = tvd::s_k(p, p_prime, k);
  });
}

tvd_status tvd_s_tilde_k(double p, double p_prime, double k, double* out) {
  return guard([&] {
    need(out);
    *out = tvd::s_tilde_k(p, p_prime, k);
  });
}

tvd_status tvd_stirling_binom_check(unsigned n, unsigned k, double* lhs, double* rhs, int* holds) {
  return guard([&] {
    const auto c = tvd::stirling_binom_check(n, k);
    if (lhs) *lhs = c.lhs;
    if (rhs) *rhs = c.rhs;
    if (holds) *holds = c.holds ? 1 : 0;
  });
}

tvd_status tvd_maxpot_check(double n, double k, double x, int* holds) {
  return guard([&] {
    need(holds);
    *holds = tvd::maxpot_check(n, k, x) ? 1 : 0;
  });
}

tvd_status tvd_derpot_sign_check(double n, double k, double x, int* holds) {
  return guard([&] {
    need(holds);
    *holds = tvd::derpot_sign_check(n, k, x) ? 1 : 0;
  });
}

tvd_status tvd_bound_report_json(const tvd_distribution* p, const tvd_distribution* q, unsigned n,
                                 const tvd_limits* limits, char** out, int* lemma1_applicable) {
  return guard([&] {
    need(out);
    with_pair(p, q, [&](const auto& a, const auto& b) {
      const auto r = tvd::bound_report(a, b, n, limits_of(limits));
      *out = dup_string(tvd::bound_report_to_json(r).dump(2));
      if (lemma1_applicable) *lemma1_applicable = r.lemma1_applicable ? 1 : 0;
    });
  });
}

// ---- families

tvd_status tvd_family_create(const tvd_distribution* base, const char* z1, const char* z2, const char* t0,
                             tvd_family** out) {
  return guard([&] {
    need(base, z1, z2, out);
    std::visit(
        [&](const auto& d) {
          using F = typename std::decay_t<decltype(d)>::value_type;
          std::optional<F> start;
          if (t0) start = tvd::parse_number<F>(t0);
          *out = new tvd_family{tvd::TwoPointFamily<F>(d, z1, z2, start)};
        },
        base->d);
  });
}

void tvd_family_free(tvd_family* f) { delete f; }

tvd_status tvd_family_distance(const tvd_family* f, const char* t, unsigned n, double* value, char** exact) {
  return guard([&] {
    need(f, t);
    std::visit(
        [&](const auto& fam) {
          using F = std::decay_t<decltype(fam.p())>;
          write_value(tvd::two_point_distance(fam, tvd::parse_number<F>(t), n), value, exact);
        },
        f->f);
  });
}

tvd_status tvd_family_derivative(const tvd_family* f, unsigned n, double* value, char** exact) {
  return guard([&] {
    need(f);
    std::visit([&](const auto& fam) { write_value(tvd::derivative_exact(fam, n), value, exact); }, f->f);
  });
}

tvd_status tvd_family_jensen(const tvd_family* f, unsigned n, tvd_jensen* out) {
  return guard([&] {
    need(f, out);
    const auto j = std::visit([&](const auto& fam) { return tvd::jensen_step_check(fam, n); }, f->f);
    *out = {j.lhs, j.rhs, j.lhs_tilde, j.rhs_tilde};
  });
}

tvd_status tvd_family_decomposition_json(const tvd_family* f, unsigned n, char** out) {
  return guard([&] {
    need(f, out);
    *out = dup_string(std::visit(
        [&](const auto& fam) { return tvd::decomposition_to_json(tvd::decompose_derivative(fam, n)).dump(); }, f->f));
  });
}

tvd_status tvd_path_integral(const tvd_family* f, const char* t_from, const char* t_to, unsigned n, unsigned grid,
                             tvd_path_integral_result* out) {
  return guard([&] {
    need(f, t_from, t_to, out);
    const auto r = std::visit(
        [&](const auto& fam) {
          using F = std::decay_t<decltype(fam.p())>;
          return tvd::path_integral_check(fam, tvd::parse_number<F>(t_from), tvd::parse_number<F>(t_to), n, grid);
        },
        f->f);
    *out = {r.distance, r.integral, r.lemma1_rhs, r.pbar, r.cells};
  });
}

// ---- chains

tvd_status tvd_chain_build(const tvd_distribution* p, const tvd_distribution* q, tvd_chain** out) {
  return guard([&] {
    need(out);
    with_pair(p, q, [&](const auto& a, const auto& b) { *out = new tvd_chain{tvd::two_point_chain(a, b)}; });
  });
}

void tvd_chain_free(tvd_chain* c) { delete c; }

size_t tvd_chain_length(const tvd_chain* c) {
  if (!c) return 0;
  return std::visit([](const auto& x) { return x.length(); }, c->c);
}

tvd_status tvd_chain_step(const tvd_chain* c, size_t index, tvd_distribution** out) {
  return guard([&] {
    need(c, out);
    std::visit(
        [&](const auto& x) {
          if (index >= x.length()) tvd::fail(tvd::Errc::OutOfRange, "chain step index out of range");
          *out = new tvd_distribution{x.steps[index]};
        },
        c->c);
  });
}

tvd_status tvd_chain_to_json(const tvd_chain* c, char** out) {
  return guard([&] {
    need(c, out);
    *out = dup_string(std::visit([](const auto& x) { return tvd::chain_to_json(x).dump(2); }, c->c));
  });
}

tvd_status tvd_chain_assembly_json(const tvd_distribution* p, const tvd_distribution* q, unsigned n,
                                   const tvd_limits* limits, char** out) {
  return guard([&] {
    need(out);
    with_pair(p, q, [&](const auto& a, const auto& b) {
      *out = dup_string(tvd::chain_assembly_to_json(tvd::chain_bound_assembly(a, b, n, limits_of(limits))).dump(2));
    });
  });
}

// ---- tables

tvd_status tvd_growth_sweep(const tvd_distribution* p, const tvd_distribution* q, unsigned n_max,
                            const tvd_limits* limits, tvd_table** out) {
  return guard([&] {
    need(out);
    with_pair(p, q, [&](const auto& a, const auto& b) {
      *out = new tvd_table{tvd::growth_sweep(a, b, n_max, limits_of(limits))};
    });
  });
}

tvd_status tvd_tightness_probe(double pbar, unsigned n_max, double delta, tvd_table** out) {
  return guard([&] {
    need(out);
    *out = new tvd_table{tvd::tightness_probe(pbar, n_max, delta)};
  });
}

tvd_status tvd_constant_probe(unsigned n_max, tvd_table** out) {
  return guard([&] {
    need(out);
    *out = new tvd_table{tvd::constant_probe(n_max)};
  });
}

void tvd_table_free(tvd_table* t) { delete t; }

size_t tvd_table_rows(const tvd_table* t) { return t ? t->t.rows.size() : 0; }

size_t tvd_table_columns(const tvd_table* t) { return t ? t->t.columns.size() : 0; }

const char* tvd_table_column_name(const tvd_table* t, size_t column) {
  if (!t || column >= t->t.columns.size()) return nullptr;
  return t->t.columns[column].c_str();
}

double tvd_table_value(const tvd_table* t, size_t row, size_t column) {
  if (!t || row >= t->t.rows.size() || column >= t->t.columns.size()) return tvd::kNaN;
  return t->t.rows[row][column];
}

tvd_status tvd_table_to_csv(const tvd_table* t, char** out) {
  return guard([&] {
    need(t, out);
    *out = dup_string(t->t.to_csv());
  });
}

tvd_status tvd_table_to_json(const tvd_table* t, char** out) {
  return guard([&] {
    need(t, out);
    *out = dup_string(t->t.to_json());
  });
}

}  // extern "C"
