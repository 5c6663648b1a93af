#pragma once

#include <stdexcept>
#include <string>

namespace npdual {

enum class ErrorCode {
  DimensionMismatch,
  AlphaOutOfRange,
  NegativeDensity,
  UnnormalizedDensity,
  EmptyFamily,
  DuplicateMember,
  NonpositiveWeight,
  UnnormalizedMeasure,
  InvalidTestValue,
  NumericalBreakdown,
  SeedRequired,
  CertificateInconsistency,
  NotCertified,
  ScalarAlphaRequired,
  TooLarge,
  GridTooCoarse,
  NotSolved,
  InternalError,
  InvalidArgument,
  IoError,
};

const char* to_string(ErrorCode code);

/// Exception carrying a machine-readable code; the message names the
/// offending field and index where applicable.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace npdual
