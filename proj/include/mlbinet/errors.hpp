#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace mlbinet {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad config file key/value or invalid flag combination.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Malformed corpus, embedding or checkpoint input.
class DataError : public Error {
 public:
  using Error::Error;
};

// Non-conformable operands in a graph op.
class ShapeError : public Error {
 public:
  ShapeError(const std::string& op, std::pair<std::size_t, std::size_t> lhs,
             std::pair<std::size_t, std::size_t> rhs)
      : Error(op + ": shape mismatch (" + std::to_string(lhs.first) + "x" +
              std::to_string(lhs.second) + " vs " + std::to_string(rhs.first) +
              "x" + std::to_string(rhs.second) + ")") {}
  ShapeError(const std::string& op, const std::string& detail)
      : Error(op + ": " + detail) {}
};

// Non-finite values, misuse of backward, failed numeric checks.
class NumericError : public Error {
 public:
  using Error::Error;
};

}  // namespace mlbinet
