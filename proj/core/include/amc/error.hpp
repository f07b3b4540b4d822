#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace amc {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument or configuration value is outside its valid domain.
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// A feature is undefined for the given input (zero power, empty mask, ...).
class DegenerateInputError : public Error {
 public:
  DegenerateInputError(std::string feature, const std::string& what)
      : Error(feature + ": " + what), feature_(std::move(feature)) {}

  const std::string& feature() const noexcept { return feature_; }

 private:
  std::string feature_;
};

/// A value fed to a model or estimator is not usable (e.g. non-finite).
class InputError : public Error {
 public:
  using Error::Error;
};

/// A file does not follow its documented format.
class FormatError : public Error {
 public:
  FormatError(const std::string& what, std::size_t line = 0)
      : Error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

  /// 1-based line number, or 0 when the error is not tied to a line.
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Filesystem or stream failure.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace amc
