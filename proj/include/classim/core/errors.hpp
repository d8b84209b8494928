#pragma once

#include <stdexcept>
#include <string>

namespace classim {

/// Input failed validation: malformed files, empty classes, missing scores.
class DataError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A numerical routine could not produce a finite result.
class NumericalError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Bad invocation: unknown flags, conflicting modes.
class UsageError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

}  // namespace classim
