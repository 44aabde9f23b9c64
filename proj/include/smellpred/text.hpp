#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace smellpred {

/// Shortest decimal form that parses back to the same double.
std::string format_double(double value);

/// Fixed-point form with the given number of decimals, C locale.
std::string format_fixed(double value, int decimals);

/// Strict full-string parse of a double; nullopt on failure or non-finite.
std::optional<double> parse_double(std::string_view text);

std::string_view trim(std::string_view text);

/// Splits on '\n', stripping one trailing '\r' per line. A trailing final
/// newline does not produce an extra element.
std::vector<std::string_view> split_lines(std::string_view text);

std::vector<std::string_view> split(std::string_view text, char separator);

} // namespace smellpred
