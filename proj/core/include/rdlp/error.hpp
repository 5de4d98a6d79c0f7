#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rdlp {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input data. Carries the 1-based line number when raised while
/// reading a file (0 otherwise).
class DataError : public Error {
 public:
  explicit DataError(const std::string& what, std::size_t line = 0)
      : Error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Invalid algorithm parameters (cluster counts, map sizes, bin counts).
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// A validity index or qualitative measure is undefined for the given input.
class MetricError : public Error {
 public:
  using Error::Error;
};

}  // namespace rdlp
