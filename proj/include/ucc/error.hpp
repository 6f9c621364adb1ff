#pragma once

#include <stdexcept>
#include <string>

namespace ucc {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input matrix deviates from unitarity by more than the tolerance.
class NonUnitaryError : public Error {
 public:
  NonUnitaryError(const std::string& what, double deviation)
      : Error(what), deviation_(deviation) {}
  double deviation() const noexcept { return deviation_; }

 private:
  double deviation_;
};

/// Mode count, module size or factor indices are incompatible.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// CSD partition with m + n != dim or m > n.
class InvalidPartitionError : public Error {
 public:
  using Error::Error;
};

/// Circuit IR violates a structural invariant.
class MalformedCircuitError : public Error {
 public:
  using Error::Error;
};

/// JSON document does not follow the expected schema. The message carries a
/// JSON-pointer-like path to the offending value.
class SchemaError : public Error {
 public:
  using Error::Error;
};

/// Requested operation does not apply to the circuit's architecture.
class UnsupportedArchitectureError : public Error {
 public:
  using Error::Error;
};

class ZeroMatrixError : public Error {
 public:
  using Error::Error;
};

}  // namespace ucc
