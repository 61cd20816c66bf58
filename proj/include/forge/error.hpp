#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace forge {

enum class ErrorCode {
  CycleDetected,
  UnknownElement,
  SizeBound,
  NotAPartition,
  InvalidTriple,
  HostMismatch,
  NotInLambda,
  OracleUnavailable,
  FiniteHost,
  InconsistentWithK,
  PreconditionViolated,
  ForcedZConflictsAvoid,
  WrongLimitMode,
  NotAcceptable,
  OrbitBudgetExhausted,
  NotAValidTriple,
  BudgetExhausted,
  BadConfig,
  CorruptArtifact,
  StageOutOfRange,
  Internal,
};

std::string_view to_string(ErrorCode c);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace forge
