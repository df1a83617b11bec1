#pragma once

#include <stdexcept>
#include <string>

namespace tvd {

enum class Errc {
  NegativeProbability,
  SumNotOne,
  DuplicateLabel,
  TooLarge,
  NotTwoPoint,
  PbarNotPositive,
  NonpositiveMass,
  OutOfRange,
  InvalidArgument,
  Parse,
};

const char* errc_name(Errc code) noexcept;

/// Every failure raised by the library carries one of the codes above; the
/// C API maps them one-to-one onto tvd_status values.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

}  // namespace tvd
