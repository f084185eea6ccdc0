#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace diagfp {

enum class ErrorCode {
  Syntax,
  NotExpandable,
  BadPrime,
  Budget,
  ZeroInput,
  DimMismatch,
  DegreeOverflow,
  StateBudget,
  InsufficientPrecision,
  ZeroUpToPrecision,
  RankUnstable,
  SingularA,
  VerifyFail,
  Inseparable,
  ResultantZero,
  Precondition,
  CertFail,
  BitBudget,
};

inline std::string_view error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::Syntax: return "E_SYNTAX";
    case ErrorCode::NotExpandable: return "E_NOT_EXPANDABLE";
    case ErrorCode::BadPrime: return "E_BAD_PRIME";
    case ErrorCode::Budget: return "E_BUDGET";
    case ErrorCode::ZeroInput: return "E_ZERO_INPUT";
    case ErrorCode::DimMismatch: return "E_DIM_MISMATCH";
    case ErrorCode::DegreeOverflow: return "E_DEGREE_OVERFLOW";
    case ErrorCode::StateBudget: return "E_STATE_BUDGET";
    case ErrorCode::InsufficientPrecision: return "E_INSUFFICIENT_PRECISION";
    case ErrorCode::ZeroUpToPrecision: return "E_ZERO_UP_TO_PRECISION";
    case ErrorCode::RankUnstable: return "E_RANK_UNSTABLE";
    case ErrorCode::SingularA: return "E_SINGULAR_A";
    case ErrorCode::VerifyFail: return "E_VERIFY_FAIL";
    case ErrorCode::Inseparable: return "E_INSEPARABLE";
    case ErrorCode::ResultantZero: return "E_RESULTANT_ZERO";
    case ErrorCode::Precondition: return "E_PRECONDITION";
    case ErrorCode::CertFail: return "E_CERT_FAIL";
    case ErrorCode::BitBudget: return "E_BIT_BUDGET";
  }
  return "E_UNKNOWN";
}

// Every failure in the library is reported as an Error carrying one of the
// codes above; the message adds context for humans.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_name(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace diagfp
