#pragma once

#include <stdexcept>
#include <string>

namespace invdim {

/// Malformed or out-of-range input (non-finite entries, bad parameters, ...).
class InvalidInput : public std::invalid_argument {
 public:
  explicit InvalidInput(const std::string& msg) : std::invalid_argument(msg) {}
};

/// Operation not available for this system (e.g. inverse of a non-invertible map).
class UnsupportedOperation : public std::runtime_error {
 public:
  explicit UnsupportedOperation(const std::string& msg) : std::runtime_error(msg) {}
};

/// Point lies outside the map's domain of definition.
class OutsideDomain : public std::runtime_error {
 public:
  explicit OutsideDomain(const std::string& msg) : std::runtime_error(msg) {}
};

/// Sampler could not produce the requested cloud (orbit escapes past the retry limit).
class SamplerFailure : public std::runtime_error {
 public:
  explicit SamplerFailure(const std::string& msg) : std::runtime_error(msg) {}
};

/// Too few usable scales remain after saturation filtering.
class InsufficientScales : public std::runtime_error {
 public:
  InsufficientScales(const std::string& msg, std::string diagnostics)
      : std::runtime_error(msg + "\n" + diagnostics), diagnostics_(std::move(diagnostics)) {}
  const std::string& diagnostics() const { return diagnostics_; }

 private:
  std::string diagnostics_;
};

/// A located preimage is too close to a critical point; pick another target value.
class NearCriticalValue : public std::runtime_error {
 public:
  explicit NearCriticalValue(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace invdim
