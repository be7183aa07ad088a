#include "superrad/error.hpp"

namespace superrad {

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(message), kind_(kind) {}

const char* error_kind_name(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidParameter: return "invalid parameter";
    case ErrorKind::InvalidArgument: return "invalid argument";
    case ErrorKind::EliminationUndefined: return "elimination undefined";
    case ErrorKind::NonFinite: return "non-finite value";
    case ErrorKind::StiffnessFailure: return "stiffness failure";
    case ErrorKind::NoConvergence: return "no convergence";
    case ErrorKind::UnsupportedClassification: return "unsupported classification";
    case ErrorKind::CutoffSaturation: return "cutoff saturation";
    case ErrorKind::PoorFit: return "poor fit";
    case ErrorKind::PeakNotBracketed: return "peak not bracketed";
    case ErrorKind::ClosureViolation: return "closure violation";
    case ErrorKind::Io: return "i/o error";
  }
  return "unknown error";
}

}  // namespace superrad
