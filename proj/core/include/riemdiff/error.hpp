#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace riemdiff {

// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed expression source. `offset` is the byte offset of the offending token.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t offset)
      : Error(message + " at offset " + std::to_string(offset)), offset_(offset) {}
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

// Unbound variable or domain violation during evaluation.
class EvalError : public Error {
 public:
  EvalError(const std::string& message, std::size_t offset)
      : Error(message + " (expression offset " + std::to_string(offset) + ")"),
        offset_(offset) {}
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

// Metric samples that are not symmetric positive definite.
class MetricError : public Error {
 public:
  MetricError(const std::string& message, std::size_t node)
      : Error(message), node_(node) {}
  std::size_t node() const noexcept { return node_; }

 private:
  std::size_t node_;
};

// Invalid configuration: wrong shapes, ranges, or references.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Runtime numerical failure (state leaves the tabulated range, NaN, ...).
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace riemdiff
