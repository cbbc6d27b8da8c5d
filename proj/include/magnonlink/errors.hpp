#pragma once

#include <stdexcept>
#include <string>

namespace magnonlink {

/// Base of every error raised by the library. `code()` is the short
/// machine-readable tag printed by the CLI as `code: message`.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)) {}
  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

/// Invalid input values, malformed configs or files.
class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& message)
      : Error("validation", message) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& message) : Error("io", message) {}
};

/// A response denominator vanished (only reachable with lossless inputs).
class SingularInputError : public Error {
 public:
  explicit SingularInputError(const std::string& message)
      : Error("singular", message) {}
};

class ConvergenceError : public Error {
 public:
  explicit ConvergenceError(const std::string& message)
      : Error("convergence", message) {}
};

/// The optimum landed on the boundary of the search window.
class SearchSpanError : public Error {
 public:
  explicit SearchSpanError(const std::string& message)
      : Error("span", message) {}
};

}  // namespace magnonlink
