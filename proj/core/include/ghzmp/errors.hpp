#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace ghzmp {

/// Malformed or out-of-range input to a library operation.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A computational guard (enumeration size, model count) was exceeded.
class ResourceLimit : public std::runtime_error {
 public:
  ResourceLimit(const std::string& what, std::uint64_t requested, std::uint64_t bound)
      : std::runtime_error(what), requested_(requested), bound_(bound) {}

  std::uint64_t requested() const noexcept { return requested_; }
  std::uint64_t bound() const noexcept { return bound_; }

 private:
  std::uint64_t requested_;
  std::uint64_t bound_;
};

/// An internal cross-check failed. Never caused by valid input.
class IntegrityError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Checked 64-bit rational arithmetic left its representable range.
class RationalOverflow : public std::overflow_error {
 public:
  using std::overflow_error::overflow_error;
};

}  // namespace ghzmp
