#pragma once

#include <stdexcept>

namespace nlpot {

// Bad arguments: dimension mismatch, parameters outside a family, inadmissible psi.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// An algorithm could not produce a trustworthy number (no bracket, eigen solver failure, ...).
class NumericalFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace nlpot
