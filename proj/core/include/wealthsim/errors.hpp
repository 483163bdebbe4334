#pragma once

#include <stdexcept>
#include <string>

namespace wealthsim {

/// Invalid parameters or configuration. The CLI maps this to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Failure to read or write a file; the message carries the path.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Broken internal contract (shape mismatch, violated invariant).
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace wealthsim
