#ifndef RAMANPASS_ERRORS_HPP
#define RAMANPASS_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace raman {

// Base class for everything thrown by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Lexical or syntax error in an envelope expression. Carries the character
// offset into the source string.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t offset)
      : Error(message + " (offset " + std::to_string(offset) + ")"),
        offset_(offset) {}

  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

// Bad protocol file or inconsistent parameter set. Exit code 1 at the CLI.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Base for runtime numerical failures. Exit code 2 at the CLI.
class NumericalError : public Error {
 public:
  using Error::Error;
};

// Envelope expression evaluated outside its domain (sqrt of a negative,
// division by zero, non-finite result, ...).
class EvalDomainError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

// Query at or beyond the mixing-angle cap where sec(theta) blows up.
class SingularityError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

// Adaptive integration failed (step-size underflow near a singularity).
class IntegrationError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

// A requested population threshold is not reached within the domain.
class ThresholdError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace raman

#endif  // RAMANPASS_ERRORS_HPP
