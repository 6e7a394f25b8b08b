#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace uwbped {

// Shortest decimal representation that round-trips to the same double.
// Always uses '.' as decimal separator, independent of locale.
std::string format_double(double value);

// Locale-independent strict parse of the whole string. Rejects empty input,
// trailing garbage and leading whitespace; accepts "nan"/"inf" spellings,
// so callers must check finiteness themselves.
std::optional<double> parse_double(std::string_view text);

}  // namespace uwbped
