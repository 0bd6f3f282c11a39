#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace windcheck {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Position inside a text input, 1-based.
struct SourcePos {
  std::size_t line = 0;
  std::size_t column = 0;
};

/// Malformed text input (model, formula, explicit DTMC file, config).
class ParseError : public Error {
 public:
  ParseError(const std::string& what, SourcePos pos);

  SourcePos pos() const { return pos_; }
  const std::string& message() const { return message_; }

 private:
  std::string message_;
  SourcePos pos_;
};

/// Semantic problems found while validating or building a model.
class ModelError : public Error {
 public:
  using Error::Error;
};

/// Mission or sweep configuration outside its documented domain.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Check-time problems with a formula (unknown label or reward structure).
class FormulaError : public Error {
 public:
  using Error::Error;
};

/// Iterative solver hit its cap before reaching the requested residual.
class NumericError : public Error {
 public:
  NumericError(const std::string& what, std::size_t iterations, double residual)
      : Error(what), iterations_(iterations), residual_(residual) {}

  std::size_t iterations() const { return iterations_; }
  double residual() const { return residual_; }

 private:
  std::size_t iterations_;
  double residual_;
};

}  // namespace windcheck
