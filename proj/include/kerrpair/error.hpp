#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace kerrpair {

enum class ErrorKind {
  Validation,           // a documented precondition is violated
  NotHermitian,
  DegenerateKernel,
  NoKernel,
  MaxSubdivisions,
  QuadratureFailure,
  GridTooCoarse,
  ZeroInteraction,
  OffGridMomentum,
  ResonantDenominator,
  TruncationTooSmall,
  DimensionMismatch,
  SolverFailure,
};

std::string_view to_string(ErrorKind kind);

// Numerical failures map to a different CLI exit status than validation ones.
bool is_numerical(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Validation: return "Validation";
    case ErrorKind::NotHermitian: return "NotHermitian";
    case ErrorKind::DegenerateKernel: return "DegenerateKernel";
    case ErrorKind::NoKernel: return "NoKernel";
    case ErrorKind::MaxSubdivisions: return "MaxSubdivisions";
    case ErrorKind::QuadratureFailure: return "QuadratureFailure";
    case ErrorKind::GridTooCoarse: return "GridTooCoarse";
    case ErrorKind::ZeroInteraction: return "ZeroInteraction";
    case ErrorKind::OffGridMomentum: return "OffGridMomentum";
    case ErrorKind::ResonantDenominator: return "ResonantDenominator";
    case ErrorKind::TruncationTooSmall: return "TruncationTooSmall";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::SolverFailure: return "SolverFailure";
  }
  return "Unknown";
}

inline bool is_numerical(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Validation:
    case ErrorKind::ZeroInteraction:
    case ErrorKind::OffGridMomentum:
    case ErrorKind::ResonantDenominator:
    case ErrorKind::TruncationTooSmall:
    case ErrorKind::DimensionMismatch:
      return false;
    default:
      return true;
  }
}

}  // namespace kerrpair
