#ifndef TDPROBE_ERRORS_HPP
#define TDPROBE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace tdprobe {

// Base class for everything thrown by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid or inconsistent configuration (CLI exit code 2).
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Missing or stale upstream artifact (CLI exit code 3).
class DependencyError : public Error {
 public:
  using Error::Error;
};

// Non-finite values, divergence, singular inputs (CLI exit code 4).
class NumericalError : public Error {
 public:
  using Error::Error;
};

// Requested operation that a representation source cannot perform,
// e.g. propagating an edit through a pure replay source.
class CapabilityError : public Error {
 public:
  using Error::Error;
};

enum class StoreErrc {
  bad_magic = 1,
  version_mismatch,
  truncated,
  header_mismatch,
  parse_error,
  order_violation,
  non_finite,
  io_error,
};

const char* to_string(StoreErrc c);

// Persistence-layer failure with a distinct code per failure mode.
class StoreError : public Error {
 public:
  StoreError(StoreErrc code, const std::string& what)
      : Error(std::string(to_string(code)) + ": " + what), code_(code) {}

  StoreErrc code() const { return code_; }

 private:
  StoreErrc code_;
};

}  // namespace tdprobe

#endif
