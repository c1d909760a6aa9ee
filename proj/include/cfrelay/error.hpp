#pragma once

#include <stdexcept>
#include <string>

namespace cfrelay {

enum class ErrorCode {
  InvalidArgument,  // precondition violated by the caller
  Validation,       // a channel spec fails normalization / dimension checks
  Parse,            // malformed spec document
  Io,               // file could not be read or written
  ModeMismatch,     // operation not defined for the spec's mode
  Numerical,        // tolerance inconsistency or solver failure
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace cfrelay
