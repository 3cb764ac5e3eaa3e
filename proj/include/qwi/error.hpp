// Copyright 2026 The qwi Authors. Licensed under the Apache License, Version 2.0.
#pragma once

#include <stdexcept>
#include <string>

namespace qwi {

enum class ErrorCode {
  UnknownOp,
  ArityMismatch,
  UnboundVariable,
  PartialAlgebra,
  InfeasibleExhaustive,
  InfinitaryArity,
  NameClash,
  SyntaxError,
  UnsupportedParameterType,
  NotSatisfying,
  CoherenceFailure,
  CycleDetected,
  FunctorialityViolation,
  StageOverflow,
  NotStabilized,
  Usage,
};

const char* errorName(ErrorCode c);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& msg)
      : std::runtime_error(std::string(errorName(code)) + ": " + msg), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace qwi
