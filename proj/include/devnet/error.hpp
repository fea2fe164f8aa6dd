#pragma once

#include <stdexcept>

namespace devnet {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Unreadable input, unwritable output, malformed artifact files. CLI exit 2.
struct IoError : Error {
  using Error::Error;
};

// Contract breaches and failed computations (non-convergence, undefined
// quantities, invariant violations). CLI exit 1.
struct AnalysisError : Error {
  using Error::Error;
};

}  // namespace devnet
