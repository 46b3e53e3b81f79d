#pragma once

#include <stdexcept>
#include <string>

namespace pec {

enum class ErrorCode {
  kNonFinite,
  kDimensionMismatch,
  kNotSymmetric,
  kNotPositiveDefinite,
  kNotObservable,
  kNotStabilizable,
  kNotDetectable,
  kBadIndex,
  kNonPositivePeak,
  kRankDeficientC,
  kKernelViolation,
  kNotStable,
  kDetectorUnstable,
  kInfeasible,
  kNumericalTrouble,
  kAllInfeasible,
  kCertificateMismatch,
  kStepTooLarge,
  kParse,
};

const char* ErrorCodeName(ErrorCode code);

// Every failure in the library surfaces as a PecError carrying a code.
class PecError : public std::runtime_error {
 public:
  PecError(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace pec
