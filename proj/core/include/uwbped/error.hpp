#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace uwbped {

// Invalid parameters or configuration (non-positive lengths, bad section
// placement, infeasible scenario).
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Malformed input record. line() is 1-based; field() names the offending
// column ("t", "tag_id", ...) or "row"/"header" for structural problems.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, std::string field, const std::string& message);

  std::size_t line() const noexcept { return line_; }
  const std::string& field() const noexcept { return field_; }

 private:
  std::size_t line_;
  std::string field_;
};

// Data that is well-formed but unusable (no accepted tags, inverted
// boundary times, unreadable files).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace uwbped
