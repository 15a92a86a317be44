#ifndef TORIC_ERROR_HPP
#define TORIC_ERROR_HPP

#include <stdexcept>
#include <string>

namespace toric {

enum class ErrorCode {
  InvalidInput,
  EmptyInterior,
  Unbounded,
  RedundantFacet,
  NonPrimitiveNormal,
  NonIntegralNormal,
  DegenerateSimplex,
  TauOutsidePolytope,
  EvaluationOutsideDomain,
  InvalidAngles,
  LPFailure,
  NonConvergence,
  NonConvexIterate,
  InversionFailure,
  OracleNonConvergence,
  AlphaTooLarge,
  IOError,
};

// Single exception type; `code` drives CLI exit status mapping and lets
// tests assert on the exact failure class. `index` is the offending facet
// or node where that makes sense, -1 otherwise.
class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& what, long index = -1)
      : std::runtime_error(what), code_(code), index_(index) {}

  ErrorCode code() const { return code_; }
  long index() const { return index_; }

private:
  ErrorCode code_;
  long index_;
};

inline const char* error_code_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::InvalidInput: return "InvalidInput";
    case ErrorCode::EmptyInterior: return "EmptyInterior";
    case ErrorCode::Unbounded: return "Unbounded";
    case ErrorCode::RedundantFacet: return "RedundantFacet";
    case ErrorCode::NonPrimitiveNormal: return "NonPrimitiveNormal";
    case ErrorCode::NonIntegralNormal: return "NonIntegralNormal";
    case ErrorCode::DegenerateSimplex: return "DegenerateSimplex";
    case ErrorCode::TauOutsidePolytope: return "TauOutsidePolytope";
    case ErrorCode::EvaluationOutsideDomain: return "EvaluationOutsideDomain";
    case ErrorCode::InvalidAngles: return "InvalidAngles";
    case ErrorCode::LPFailure: return "LPFailure";
    case ErrorCode::NonConvergence: return "NonConvergence";
    case ErrorCode::NonConvexIterate: return "NonConvexIterate";
    case ErrorCode::InversionFailure: return "InversionFailure";
    case ErrorCode::OracleNonConvergence: return "OracleNonConvergence";
    case ErrorCode::AlphaTooLarge: return "AlphaTooLarge";
    case ErrorCode::IOError: return "IOError";
  }
  return "Unknown";
}

}  // namespace toric

#endif
