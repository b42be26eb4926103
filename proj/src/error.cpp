#include "maxcorr/error.hpp"

namespace maxcorr {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NegativeMass: return "NegativeMass";
    case ErrorKind::MassNotOne: return "MassNotOne";
    case ErrorKind::EmptySupport: return "EmptySupport";
    case ErrorKind::SpectrumAnomaly: return "SpectrumAnomaly";
    case ErrorKind::SizeOverflow: return "SizeOverflow";
    case ErrorKind::OutOfRange: return "OutOfRange";
    case ErrorKind::BadIndices: return "BadIndices";
    case ErrorKind::QuadratureFailure: return "QuadratureFailure";
    case ErrorKind::UnsupportedMeasure: return "UnsupportedMeasure";
    case ErrorKind::NotSymmetric: return "NotSymmetric";
    case ErrorKind::NotNested: return "NotNested";
    case ErrorKind::MonotonicityViolation: return "MonotonicityViolation";
    case ErrorKind::DegenerateAxis: return "DegenerateAxis";
    case ErrorKind::DuplicateLabel: return "DuplicateLabel";
    case ErrorKind::ParseError: return "ParseError";
  }
  return "Unknown";
}

}  // namespace maxcorr
