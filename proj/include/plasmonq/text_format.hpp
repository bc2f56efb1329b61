#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace plasmonq {

/// Shortest decimal form that parses back to the same double.
std::string format_number(double x);
/// Rounds to `digits` significant digits (used for report statistics).
double round_significant(double x, int digits = 6);

std::string_view trim(std::string_view s);
std::vector<std::string_view> split_lines(std::string_view text);
std::vector<std::string_view> split_fields(std::string_view line, char sep);

/// Strict parsers; `where` prefixes the DataError message.
double parse_double(std::string_view field, const std::string& where);
std::uint64_t parse_u64(std::string_view field, const std::string& where);

}  // namespace plasmonq
