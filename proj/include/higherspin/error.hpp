#pragma once

#include <stdexcept>
#include <string>

namespace higherspin {

enum class ErrorCode {
  InvalidArgument = 1,
  DimensionMismatch = 2,
  Singular = 3,
  DomainViolation = 4,
  NonFinite = 5,
  Io = 6,
  NotCalibrated = 7,
};

/// Base exception for every failure raised by the library. The code maps
/// one-to-one onto the status values of the C interface.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline void require(bool cond, ErrorCode code, const std::string& what) {
  if (!cond) throw Error(code, what);
}

}  // namespace higherspin
