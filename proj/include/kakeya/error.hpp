#pragma once

#include <stdexcept>
#include <string>

namespace kakeya {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid arguments: bad modulus, mismatched characteristics, malformed input.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// A computation refused to materialize an object above the configured cell cap.
class GuardExceeded : public Error {
 public:
  using Error::Error;
};

// A row of B is outside the row space of A in solve_row_factor.
class NotFactorable : public Error {
 public:
  NotFactorable(const std::string& what, std::size_t row)
      : Error(what), row_(row) {}
  std::size_t row() const { return row_; }

 private:
  std::size_t row_;
};

// An internal identity that must hold by construction failed to hold.
class AssertionFailure : public Error {
 public:
  using Error::Error;
};

inline constexpr std::size_t kDefaultCellGuard = 16'000'000;

}  // namespace kakeya
