#include "tvd/json_io.hpp"

namespace tvd {

Json parse_json(std::string_view text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    fail(Errc::Parse, std::string("invalid JSON: ") + e.what());
  }
}

template <>
Rational number_from_json<Rational>(const Json& j) {
  if (j.is_string()) return parse_number<Rational>(j.get<std::string>());
  if (j.is_number_integer()) return Rational(BigInt(std::to_string(j.get<long long>())));
  if (j.is_number_float()) return parse_number<Rational>(to_string(j.get<double>()));
  fail(Errc::Parse, "probability must be a number or a string");
}

template <>
double number_from_json<double>(const Json& j) {
  if (j.is_string()) return parse_number<double>(j.get<std::string>());
  if (j.is_number()) return j.get<double>();
  fail(Errc::Parse, "probability must be a number or a string");
}

Json bound_report_to_json(const BoundReport& r) {
  auto opt = [](const auto& o) { return o ? Json(*o) : Json(nullptr); };
  Json j;
  j["n"] = r.n;
  j["backend"] = r.backend;
  j["delta_1"] = r.delta_1;
  j["delta_1_exact"] = r.delta_1_exact;
  j["diff_set"] = r.diff_set;
  j["pbar"] = opt(r.pbar);
  j["pbar_exact"] = opt(r.pbar_exact);
  j["linear"] = r.linear.value;
  j["linear_capped"] = r.linear.capped;
  j["lemma1_applicable"] = r.lemma1_applicable;
  j["lemma1_first"] = opt(r.lemma1_first);
  j["lemma1_second"] = opt(r.lemma1_second);
  j["distance"] = opt(r.distance);
  j["distance_exact"] = opt(r.distance_exact);
  j["engine"] = r.engine ? Json(engine_name(*r.engine)) : Json(nullptr);
  j["dominance"] = dominance_holds(r);
  return j;
}

}  // namespace tvd
