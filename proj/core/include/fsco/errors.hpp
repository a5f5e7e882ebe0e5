#ifndef FSCO_ERRORS_HPP
#define FSCO_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace fsco {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Tensor/layer shape disagreement.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Invalid argument value (out-of-range scalar, bad target label, ...).
class ArgumentError : public Error {
 public:
  using Error::Error;
};

/// Operation called in the wrong order (backward before forward, ...).
class StateError : public Error {
 public:
  using Error::Error;
};

/// NaN/Inf surfaced in a value that must stay finite.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// Malformed input file (bad magic, bad field).
class FormatError : public Error {
 public:
  using Error::Error;
};

/// Config file problem; message names the key and line.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Filesystem / stream failure.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace fsco

#endif  // FSCO_ERRORS_HPP
