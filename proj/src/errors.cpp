#include "npdual/errors.hpp"

namespace npdual {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::AlphaOutOfRange: return "AlphaOutOfRange";
    case ErrorCode::NegativeDensity: return "NegativeDensity";
    case ErrorCode::UnnormalizedDensity: return "UnnormalizedDensity";
    case ErrorCode::EmptyFamily: return "EmptyFamily";
    case ErrorCode::DuplicateMember: return "DuplicateMember";
    case ErrorCode::NonpositiveWeight: return "NonpositiveWeight";
    case ErrorCode::UnnormalizedMeasure: return "UnnormalizedMeasure";
    case ErrorCode::InvalidTestValue: return "InvalidTestValue";
    case ErrorCode::NumericalBreakdown: return "NumericalBreakdown";
    case ErrorCode::SeedRequired: return "SeedRequired";
    case ErrorCode::CertificateInconsistency: return "CertificateInconsistency";
    case ErrorCode::NotCertified: return "NotCertified";
    case ErrorCode::ScalarAlphaRequired: return "ScalarAlphaRequired";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::GridTooCoarse: return "GridTooCoarse";
    case ErrorCode::NotSolved: return "NotSolved";
    case ErrorCode::InternalError: return "InternalError";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::IoError: return "IoError";
  }
  return "UnknownError";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message),
      code_(code) {}

}  // namespace npdual
