#pragma once

#include <stdexcept>
#include <string>

namespace rewardflow {

// Base for every error raised by the library. Callers that only need a
// message can catch this; the subclasses let tests and the CLI tell the
// failure classes apart.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Environment generation exhausted its retry budget.
class GenerationError : public Error {
 public:
  using Error::Error;
};

// API contract violated by the caller (stepping a terminal state, G=1 for
// leave-one-out, zero evaluation tasks, ...).
class UsageError : public Error {
 public:
  using Error::Error;
};

class PlannerBudgetError : public Error {
 public:
  using Error::Error;
};

class PropagationBudgetError : public Error {
 public:
  using Error::Error;
};

// Graph and trajectory disagree about which canonical states exist.
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

class NumericalError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace rewardflow
