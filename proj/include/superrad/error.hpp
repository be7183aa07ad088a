#pragma once

#include <stdexcept>
#include <string>

namespace superrad {

enum class ErrorKind {
  InvalidParameter,
  InvalidArgument,
  EliminationUndefined,
  NonFinite,
  StiffnessFailure,
  NoConvergence,
  UnsupportedClassification,
  CutoffSaturation,
  PoorFit,
  PeakNotBracketed,
  ClosureViolation,
  Io,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

const char* error_kind_name(ErrorKind kind) noexcept;

}  // namespace superrad
