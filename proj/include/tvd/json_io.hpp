#pragma once

// Distribution documents:
//
//   {"labels": ["a", "b"], "probs": [0.5, 0.5]}
//   {"probs": [0.5, 0.5]}                 labels default to z1, z2, ...
//   {"probs": ["3/10", "7/10"]}           strings are read exactly
//
// In the rational field a JSON float is read through its shortest decimal
// spelling, so 0.1 becomes 1/10.

#include <string>
#include <string_view>

#include "json.hpp"
#include "tvd/bounds.hpp"
#include "tvd/chain.hpp"
#include "tvd/derivative.hpp"
#include "tvd/distribution.hpp"

namespace tvd {

using Json = nlohmann::json;

Json parse_json(std::string_view text);

template <Field F>
F number_from_json(const Json& j);

template <Field F>
Distribution<F> distribution_from_json(const Json& j) {
  if (j.is_array()) {
    std::vector<F> probs;
    for (const auto& x : j) probs.push_back(number_from_json<F>(x));
    return Distribution<F>(std::move(probs));
  }
  if (!j.is_object() || !j.contains("probs") || !j["probs"].is_array())
    fail(Errc::Parse, "distribution needs a \"probs\" array or must be one");
  std::vector<F> probs;
  for (const auto& x : j["probs"]) probs.push_back(number_from_json<F>(x));
  if (!j.contains("labels")) return Distribution<F>(std::move(probs));
  if (!j["labels"].is_array()) fail(Errc::Parse, "\"labels\" must be an array");
  std::vector<std::string> labels;
  for (const auto& l : j["labels"]) {
    if (!l.is_string()) fail(Errc::Parse, "labels must be strings");
    labels.push_back(l.get<std::string>());
  }
  return Distribution<F>(std::move(labels), std::move(probs));
}

/// Rational probabilities are written as "num/den" strings, doubles as numbers.
template <Field F>
Json distribution_to_json(const Distribution<F>& d) {
  Json j;
  j["labels"] = d.labels();
  j["probs"] = Json::array();
  for (const auto& x : d.probs()) {
    if constexpr (is_exact_v<F>) {
      j["probs"].push_back(to_string(x));
    } else {
      j["probs"].push_back(x);
    }
  }
  return j;
}

/// Exact values as "num/den" strings in the rational field, numbers otherwise.
template <Field F>
Json value_to_json(const F& x) {
  if constexpr (is_exact_v<F>) {
    return to_string(x);
  } else {
    return x;
  }
}

Json bound_report_to_json(const BoundReport& r);

template <Field F>
Json chain_to_json(const ChainDecomposition<F>& c) {
  Json j;
  j["length"] = c.length();
  j["labels"] = c.steps.front().labels();
  j["steps"] = Json::array();
  for (const auto& s : c.steps) j["steps"].push_back(distribution_to_json(s)["probs"]);
  j["step_pairs"] = Json::array();
  for (const auto& [a, b] : c.step_pairs) j["step_pairs"].push_back({a, b});
  j["step_distances"] = Json::array();
  for (const auto& d : c.step_distances) j["step_distances"].push_back(value_to_json(d));
  return j;
}

template <Field F>
Json chain_assembly_to_json(const ChainAssembly<F>& a) {
  Json j;
  j["report"] = bound_report_to_json(a.report);
  j["chain"] = chain_to_json(a.chain);
  j["step_first_bounds"] = a.step_first_bounds;
  j["step_second_bounds"] = a.step_second_bounds;
  j["step_first_sum"] = a.step_first_sum;
  j["step_second_sum"] = a.step_second_sum;
  j["step_distance_sum"] = value_to_json(a.step_distance_sum);
  j["additive"] = a.additive;
  j["bound_sum_matches"] = a.bound_sum_matches;
  j["product_distance"] = a.product_distance ? value_to_json(*a.product_distance) : Json(nullptr);
  j["product_step_sum"] = a.product_step_sum ? value_to_json(*a.product_step_sum) : Json(nullptr);
  j["triangle_holds"] = a.triangle_holds;
  return j;
}

template <Field F>
Json decomposition_to_json(const DerivativeDecomposition<F>& d) {
  Json j;
  j["alpha"] = value_to_json(d.alpha);
  j["beta"] = value_to_json(d.beta);
  j["derivative"] = value_to_json(d.derivative);
  j["terms"] = Json::array();
  for (const auto& t : d.terms) {
    j["terms"].push_back({{"k", t.k},
                          {"qk", value_to_json(t.qk)},
                          {"rbar", t.rbar},
                          {"inner_sum", value_to_json(t.inner_sum)},
                          {"closed_form", value_to_json(t.closed_form)},
                          {"alpha_tilde", value_to_json(t.alpha_tilde)},
                          {"beta_tilde", value_to_json(t.beta_tilde)},
                          {"gamma", value_to_json(t.gamma)}});
  }
  return j;
}

}  // namespace tvd
