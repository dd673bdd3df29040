#pragma once

#include <stdexcept>
#include <string>

namespace wscj {

// Malformed or inconsistent user input (files, parameters). Exit code 1.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A component's label space exceeds the configured explosion cap.
class CapacityExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An invariant of the library itself was violated. Exit code 3.
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace wscj
