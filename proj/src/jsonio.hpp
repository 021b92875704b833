#pragma once

#include <string>
#include <string_view>

namespace factorforge::jsonio {

/// Formats a double with 17 significant digits (%.17g equivalent through
/// std::to_chars), locale independent, exact decimal round trip.
std::string format_double(double v);

/// Appends a JSON string literal including the surrounding quotes.
void append_string(std::string& out, std::string_view s);

} // namespace factorforge::jsonio
