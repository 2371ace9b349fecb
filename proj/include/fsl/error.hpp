#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <string_view>

namespace fsl {

enum class ErrorCode {
  DegreeCap,
  DegreeTooLow,
  DegreeMismatch,
  NotNormalized,
  NoNormalForm,
  BranchUndefined,
  RayBroken,
  InvalidWindow,
  NewtonDiverged,
  NotMinimal,
  PeriodicNotPreperiodic,
  NotPeriodic,
  NotRepelling,
  BranchLost,
  RadiusMismatch,
  EmptyWindow,
  LinkedConflict,
  MalformedFile,
  InvalidArgument,
};

std::string_view to_string(ErrorCode code);

// Domain error carrying a machine-readable code. The CLI maps these to exit
// status 2 and a JSON record on stderr.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

class NotMinimalError : public Error {
 public:
  NotMinimalError(int l, int p, const std::string& what)
      : Error(ErrorCode::NotMinimal, what), l_(l), p_(p) {}
  int preperiod() const noexcept { return l_; }
  int period() const noexcept { return p_; }

 private:
  int l_;
  int p_;
};

class RayBrokenError : public Error {
 public:
  RayBrokenError(std::complex<double> last_good, const std::string& what)
      : Error(ErrorCode::RayBroken, what), last_good_(last_good) {}
  std::complex<double> last_good() const noexcept { return last_good_; }

 private:
  std::complex<double> last_good_;
};

}  // namespace fsl
