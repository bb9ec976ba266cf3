#pragma once

#include <stdexcept>
#include <string>

namespace domconf {

/// Base class for every error raised on malformed user input.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace pddl {

/// Error located in a PDDL source text. `line()`/`column()` are 1-based;
/// zero means the location is unknown.
class PddlError : public InputError {
 public:
  PddlError(const std::string& message, int line, int column);

  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }
  const std::string& bare_message() const noexcept { return bare_; }

 private:
  std::string bare_;
  int line_;
  int column_;
};

class SyntaxError : public PddlError {
 public:
  using PddlError::PddlError;
};

class UnsupportedRequirementError : public PddlError {
 public:
  UnsupportedRequirementError(const std::string& requirement, int line, int column);
  const std::string& requirement() const noexcept { return requirement_; }

 private:
  std::string requirement_;
};

class ValidationError : public PddlError {
 public:
  using PddlError::PddlError;
};

}  // namespace pddl
}  // namespace domconf
