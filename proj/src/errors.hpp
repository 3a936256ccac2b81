#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace ojamed {

// Subset enumeration (or a candidate sweep derived from one) would exceed the
// configured cap. Carries the exact required count so callers can report it.
class EnumerationCapError : public std::runtime_error {
 public:
  EnumerationCapError(const std::string& msg, std::uint64_t required, std::uint64_t cap)
      : std::runtime_error(msg), required_(required), cap_(cap) {}

  std::uint64_t required() const noexcept { return required_; }
  std::uint64_t cap() const noexcept { return cap_; }

 private:
  std::uint64_t required_;
  std::uint64_t cap_;
};

class GridTooLargeError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

class SingularScatterError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

class DegenerateDataError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

class EmptyInputError : public std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

}  // namespace ojamed
