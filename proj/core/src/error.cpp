#include "uwbped/error.hpp"

#include <utility>

namespace uwbped {

ParseError::ParseError(std::size_t line, std::string field, const std::string& message)
    : std::runtime_error("line " + std::to_string(line) + ", field '" + field + "': " + message),
      line_(line),
      field_(std::move(field)) {}

}  // namespace uwbped
