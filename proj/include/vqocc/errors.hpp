#pragma once

#include <stdexcept>
#include <string>

namespace vqocc {

// Base class for all library errors. The CLI maps each category to a
// distinct process exit code.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Precondition violations: bad qubit index, mismatched lengths, invalid config.
class InvalidArgument : public Error {
  public:
    using Error::Error;
};

// Inputs that are structurally valid but unusable (zero vector, identical points).
class DegenerateInput : public Error {
  public:
    using Error::Error;
};

// Text input that does not parse; message carries the line number.
class ParseError : public Error {
  public:
    using Error::Error;
};

// Binary input with wrong magic, truncation, or inconsistent headers.
class FormatError : public Error {
  public:
    using Error::Error;
};

// Not enough data to satisfy a request (split sizes, eigencomponent count).
class CapacityError : public Error {
  public:
    using Error::Error;
};

// Iterative solver exhausted its budget; message reports the final gap.
class ConvergenceError : public Error {
  public:
    using Error::Error;
};

} // namespace vqocc
