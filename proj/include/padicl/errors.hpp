#pragma once

#include <stdexcept>
#include <string>

namespace padicl {

// Machine-readable error codes shared by the library and the CLI.
enum class Err {
  ContextMismatch,
  DivisionByZero,
  NotCoprime,
  PrecisionInsufficient,
  InvalidInput,
  FieldInconsistent,
  ConductorIncompatible,
  NotParallel,
  NotSigma0,
  NotCritical,
  SingularMatrix,
  LevelUnsupported,
  NonConvergence,
  PreconditionFailed,
  ConfigError,
  IOError,
};

const char* err_code(Err e);

class Error : public std::runtime_error {
 public:
  Error(Err code, const std::string& what)
      : std::runtime_error(std::string(err_code(code)) + ": " + what), code_(code) {}
  Err code() const { return code_; }

 private:
  Err code_;
};

}  // namespace padicl
