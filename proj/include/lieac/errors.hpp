#pragma once

#include <stdexcept>
#include <string>

namespace lieac {

// Error taxonomy shared by the library and the CLI exit-code mapping.
enum class ErrorCode {
  InvalidParameter,
  InvalidInput,
  IncompatibleDomains,
  NotInLp,
  DomainViolation,
  Unsupported,
  OutOfDomain,
  DiscontinuousJunction,
  OutOfChart,
  Incompatible,
  InvalidTangent,
  NumericalSingularity,
  InconsistentCurve,
  NoConvergence,
  InvalidControl,
};

inline const char* error_code_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::InvalidParameter: return "invalid-parameter";
    case ErrorCode::InvalidInput: return "invalid-input";
    case ErrorCode::IncompatibleDomains: return "incompatible-domains";
    case ErrorCode::NotInLp: return "not-in-Lp";
    case ErrorCode::DomainViolation: return "domain-violation";
    case ErrorCode::Unsupported: return "unsupported";
    case ErrorCode::OutOfDomain: return "out-of-domain";
    case ErrorCode::DiscontinuousJunction: return "discontinuous-junction";
    case ErrorCode::OutOfChart: return "out-of-chart";
    case ErrorCode::Incompatible: return "incompatible";
    case ErrorCode::InvalidTangent: return "invalid-tangent";
    case ErrorCode::NumericalSingularity: return "numerical-singularity";
    case ErrorCode::InconsistentCurve: return "inconsistent-curve";
    case ErrorCode::NoConvergence: return "no-convergence";
    case ErrorCode::InvalidControl: return "invalid-control";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + what),
        code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

inline void require(bool cond, ErrorCode code, const std::string& what) {
  if (!cond) fail(code, what);
}

}  // namespace lieac
