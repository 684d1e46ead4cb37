#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lq {

/// Malformed surface syntax. `position` is a byte offset into the input.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : std::runtime_error(what + " at offset " + std::to_string(position)), position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

/// A term or substitution that is not well-sorted.
class SortError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An analysis that would exceed a configured capacity cap.
class CapacityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A term outside an analysis' preconditions (open, not ground, not homogeneous).
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace lq
