#pragma once

#include <stdexcept>
#include <string>

namespace heislab {

enum class ErrorCode {
  invalid_argument,
  singular_automorphism,
  explicit_limit,
  no_good_scale,
  no_separated_demand,
  nonconverged,
  infeasible,
  unbounded,
  schema_violation,
  io,
};

const char* to_string(ErrorCode code);

/// Library-wide exception; `code()` distinguishes the failure modes callers act on.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace heislab
