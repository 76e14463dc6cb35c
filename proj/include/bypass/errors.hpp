#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace bypass {

/// Argument outside a function's mathematical domain (x <= 0 for K0, s <= 1 for the Beta-II mean, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A numerical procedure failed to reach its tolerance.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad input data: unparsable CSV, non-monotone index, non-finite observation.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid configuration value. The message names the offending field.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Non-finite observation encountered while filtering a stream.
class StreamError : public DataError {
 public:
  StreamError(std::size_t index, const std::string& what)
      : DataError("observation " + std::to_string(index) + ": " + what), index_(index) {}

  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

}  // namespace bypass
