#pragma once

#include <stdexcept>
#include <string>

namespace mzc {

// Base of every library error.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Precondition or parameter-range violation. Maps to a usage failure in the CLI.
class DomainError : public Error {
 public:
  using Error::Error;
};

// The inputs were valid but the computation failed: non-convergence, a
// singular factor, a branch-cut crossing, a memory cap.
class ComputationError : public Error {
 public:
  using Error::Error;
};

}  // namespace mzc
