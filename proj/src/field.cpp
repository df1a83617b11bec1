#include "tvd/field.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <string>

#include "tvd/error.hpp"

namespace tvd {

const char* errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::NegativeProbability: return "NegativeProbability";
    case Errc::SumNotOne: return "SumNotOne";
    case Errc::DuplicateLabel: return "DuplicateLabel";
    case Errc::TooLarge: return "TooLarge";
    case Errc::NotTwoPoint: return "NotTwoPoint";
    case Errc::PbarNotPositive: return "PbarNotPositive";
    case Errc::NonpositiveMass: return "NonpositiveMass";
    case Errc::OutOfRange: return "OutOfRange";
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::Parse: return "Parse";
  }
  return "Unknown";
}

const char* backend_name(Backend b) noexcept {
  return b == Backend::Rational ? "rational" : "float";
}

Backend parse_backend(std::string_view name) {
  if (name == "rational" || name == "exact") return Backend::Rational;
  if (name == "float" || name == "float64") return Backend::Float;
  fail(Errc::InvalidArgument, "unknown backend '" + std::string(name) + "'");
}

double to_double_up(const Rational& x) {
  double d = x.get_d();
  if (std::isfinite(d) && Rational(d) < x) d = std::nextafter(d, std::numeric_limits<double>::infinity());
  return d;
}

double to_double_down(const Rational& x) {
  double d = x.get_d();
  if (std::isfinite(d) && Rational(d) > x) d = std::nextafter(d, -std::numeric_limits<double>::infinity());
  return d;
}

double to_double(const Rational& x) {
  const double lo = to_double_down(x), hi = to_double_up(x);
  if (lo == hi || !std::isfinite(lo) || !std::isfinite(hi)) return x.get_d();
  const int c = cmp(Rational(x - Rational(lo)), Rational(Rational(hi) - x));
  if (c != 0) return c < 0 ? lo : hi;
  int e = 0;
  const double m = std::frexp(lo, &e);
  return std::fmod(std::ldexp(m, 53), 2.0) == 0.0 ? lo : hi;
}

double round_up(long double x, int slack_ulps) {
  if (!std::isfinite(x)) return static_cast<double>(x);
  if (x == 0.0L) return 0.0;
  double d = static_cast<double>(x);
  if (static_cast<long double>(d) < x) d = std::nextafter(d, std::numeric_limits<double>::infinity());
  for (int i = 0; i < slack_ulps; ++i) d = std::nextafter(d, std::numeric_limits<double>::infinity());
  return d;
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

[[noreturn]] void bad_number(std::string_view text) {
  fail(Errc::Parse, "cannot parse number '" + std::string(text) + "'");
}

Rational parse_decimal(std::string_view text) {
  const std::string_view original = text;
  bool negative = false;
  if (!text.empty() && (text.front() == '+' || text.front() == '-')) {
    negative = text.front() == '-';
    text.remove_prefix(1);
  }
  std::string digits;
  long exponent = 0;
  bool seen_digit = false;
  std::size_t i = 0;
  for (; i < text.size() && std::isdigit(static_cast<unsigned char>(text[i])); ++i) {
    digits.push_back(text[i]);
    seen_digit = true;
  }
  if (i < text.size() && text[i] == '.') {
    ++i;
    for (; i < text.size() && std::isdigit(static_cast<unsigned char>(text[i])); ++i) {
      digits.push_back(text[i]);
      --exponent;
      seen_digit = true;
    }
  }
  if (!seen_digit) bad_number(original);
  if (i < text.size() && (text[i] == 'e' || text[i] == 'E')) {
    ++i;
    long e = 0;
    auto [ptr, ec] = std::from_chars(text.data() + i, text.data() + text.size(), e);
    if (ec != std::errc() || ptr == text.data() + i) {
      // from_chars rejects a leading '+'
      if (i < text.size() && text[i] == '+') {
        auto [p2, ec2] = std::from_chars(text.data() + i + 1, text.data() + text.size(), e);
        if (ec2 != std::errc() || p2 == text.data() + i + 1) bad_number(original);
        ptr = p2;
      } else {
        bad_number(original);
      }
    }
    i = static_cast<std::size_t>(ptr - text.data());
    exponent += e;
  }
  if (i != text.size()) bad_number(original);
  if (exponent > 4096 || exponent < -4096) bad_number(original);

  BigInt mantissa(digits, 10);
  BigInt scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(exponent < 0 ? -exponent : exponent));
  Rational out = exponent < 0 ? Rational(mantissa, scale) : Rational(mantissa * scale);
  out.canonicalize();
  return negative ? Rational(-out) : out;
}

}  // namespace

template <>
Rational parse_number<Rational>(std::string_view text) {
  text = trim(text);
  if (text.empty()) bad_number(text);
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) return parse_decimal(text);
  const Rational num = parse_decimal(trim(text.substr(0, slash)));
  const Rational den = parse_decimal(trim(text.substr(slash + 1)));
  if (den == 0) fail(Errc::Parse, "zero denominator in '" + std::string(text) + "'");
  return num / den;
}

template <>
double parse_number<double>(std::string_view text) {
  text = trim(text);
  if (text.empty()) bad_number(text);
  if (text.find('/') != std::string_view::npos) return parse_number<Rational>(text).get_d();
  if (text.front() == '+') text.remove_prefix(1);
  double out = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  if (ec != std::errc() || ptr != text.data() + text.size()) bad_number(text);
  return out;
}

std::string to_string(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ptr);
}

std::string to_string(const Rational& x) { return x.get_str(); }

}  // namespace tvd
