#pragma once

#include <stdexcept>
#include <string>

namespace schurlab {

// Every failure raised by the library derives from Error, so callers that do
// not care about the category can catch a single type.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidInput : public Error {
 public:
  using Error::Error;
};

// A scalar function was evaluated outside its declared domain.
class DomainError : public Error {
 public:
  using Error::Error;
};

// An iterative routine failed to converge; the message carries diagnostics.
class NumericError : public Error {
 public:
  using Error::Error;
};

class SizeLimitError : public Error {
 public:
  using Error::Error;
};

// Growth schedule with alpha >= 1.
class ScheduleInfeasible : public Error {
 public:
  using Error::Error;
};

// The Schur multiplier annihilated the candidate, so no witness can be built.
class NoWitness : public Error {
 public:
  using Error::Error;
};

// The candidate is block diagonal with respect to the spectrum.
class DegenerateWitness : public Error {
 public:
  using Error::Error;
};

// A pipeline stage threw; `m` names the stage, what() carries the cause.
class StageFailure : public Error {
 public:
  StageFailure(int m, const std::string& cause) : Error("stage m=" + std::to_string(m) + ": " + cause), m_(m) {}
  int m() const noexcept { return m_; }

 private:
  int m_;
};

}  // namespace schurlab
