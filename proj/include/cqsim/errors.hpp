#pragma once

#include <stdexcept>
#include <string>

namespace cqsim {

// Invalid user-supplied input: malformed config file, unknown key,
// out-of-range parameter value.  CLI maps this to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// A documented precondition of the requested computation is not met
// (boundary guard, undefined coefficient, ...).  CLI maps this to exit
// code 3.  The message names the violated precondition.
class PreconditionError : public std::runtime_error {
 public:
  explicit PreconditionError(const std::string& msg) : std::runtime_error(msg) {}
};

// An internal invariant broke mid-run.  Indicates a bug in the library,
// never bad input.  CLI maps this to exit code 4.
class InternalError : public std::logic_error {
 public:
  explicit InternalError(const std::string& msg) : std::logic_error(msg) {}
};

}  // namespace cqsim
