#ifndef LOOPWORKS_ERRORS_HPP
#define LOOPWORKS_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace loopworks {

enum class ErrorCode {
  NegativeWeight,
  RowSumExceedsOne,
  SingularInterior,
  UnknownState,
  MaxStepsExceeded,
  DomainError,
  EndpointMismatch,
  NotExitPath,
  NotALoop,
  NotExitSaw,
  NotALoopAtX,
  DeadEnd,
  TooLarge,
  ZeroMass,
  MaxRetriesExceeded,
  DomainMismatch,
  TrivialLoop,
  EmptyDistribution,
  DisconnectedGraph,
  NonIntegerResult,
  ParseError,
  UsageError,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace loopworks

#endif
