#pragma once

#include <stdexcept>

namespace csd {

/// Input data violates a contract: malformed files, unresolvable ids,
/// statistics that are undefined for the data supplied.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Caller-side misuse: bad arguments, violated preconditions.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace csd
