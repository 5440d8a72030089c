#pragma once

#include <stdexcept>
#include <string>

namespace lfsr {

// Grid sizes that do not fit together (mismatched channels, indivisible scale, ...).
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A scalar parameter outside its admissible range.
class RangeError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

// Malformed or unreadable files and directories.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A solver produced non-finite state.
class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(const std::string& what, int iteration)
      : std::runtime_error(what), iteration_(iteration) {}
  int iteration() const noexcept { return iteration_; }

 private:
  int iteration_;
};

}  // namespace lfsr
