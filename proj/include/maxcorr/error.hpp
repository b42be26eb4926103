#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace maxcorr {

enum class ErrorKind {
  NegativeMass,
  MassNotOne,
  EmptySupport,
  SpectrumAnomaly,
  SizeOverflow,
  OutOfRange,
  BadIndices,
  QuadratureFailure,
  UnsupportedMeasure,
  NotSymmetric,
  NotNested,
  MonotonicityViolation,
  DegenerateAxis,
  DuplicateLabel,
  ParseError,
};

std::string_view to_string(ErrorKind kind);

// Every recoverable failure in the library is reported through this type.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace maxcorr
