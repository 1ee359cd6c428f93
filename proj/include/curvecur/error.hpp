#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace curvecur {

enum class ErrorKind {
  TrivialCurve,
  PresentationMismatch,
  UnknownGenerator,
  NotHyperbolic,
  DegenerateConfiguration,
  OutOfDomain,
  BelowThreshold,
  NoConvergence,
  NoRepresentation,
  WeightMismatch,
  InvalidCrossing,
  Unstable,
  NotGenerating,
  NotHomogeneous,
  BudgetExceeded,
  NotFilling,
  NoLiftFound,
  BadExponent,
  EdgeMismatch,
  NotCoprime,
  DegenerateGrid,
  Unsupported,
  ParseError,
};

std::string_view kind_name(ErrorKind k);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind k, const std::string& msg) {
  throw Error(k, msg);
}

}  // namespace curvecur
