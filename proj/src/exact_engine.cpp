#include "tvd/exact_engine.hpp"

namespace tvd {

const char* engine_name(Engine e) noexcept {
  switch (e) {
    case Engine::Auto: return "auto";
    case Engine::BruteForce: return "brute";
    case Engine::TypeClass: return "types";
    case Engine::TwoPoint: return "twopoint";
  }
  return "unknown";
}

Engine parse_engine(std::string_view name) {
  if (name == "auto") return Engine::Auto;
  if (name == "brute" || name == "brute-force") return Engine::BruteForce;
  if (name == "types" || name == "type-class") return Engine::TypeClass;
  if (name == "twopoint" || name == "two-point") return Engine::TwoPoint;
  fail(Errc::InvalidArgument, "unknown engine '" + std::string(name) + "'");
}

std::uint64_t outcome_count(std::size_t alphabet, unsigned n, std::uint64_t cap) {
  std::uint64_t count = 1;
  for (unsigned i = 0; i < n; ++i) {
    if (alphabet != 0 && count > cap / alphabet) return cap;
    count *= alphabet;
  }
  return count < cap ? count : cap;
}

std::uint64_t type_class_count(std::size_t alphabet, unsigned n, std::uint64_t cap) {
  if (alphabet == 0) return 0;
  // C(n + m - 1, m - 1) built as a running product of exact binomials
  // C(n + j, j), j = 1..m-1.
  unsigned __int128 count = 1;
  for (std::size_t j = 1; j < alphabet; ++j) {
    count = count * (n + j) / j;
    if (count >= cap) return cap;
  }
  return static_cast<std::uint64_t>(count);
}

}  // namespace tvd
