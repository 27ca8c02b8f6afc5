#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace triage::text {

// Shortest representation that round-trips through a double.
std::string format_double(double v);

// Fixed-point formatting for figure coordinates and labels.
std::string format_fixed(double v, int precision);

// Strict parse: '.' decimal separator, no locale, whole string must be
// consumed. Returns nullopt on any violation.
std::optional<double> parse_double(std::string_view s);
std::optional<long long> parse_int(std::string_view s);

std::vector<std::string_view> split(std::string_view line, char sep);

// Splits into lines, accepting LF or CRLF; drops a UTF-8 BOM on the
// first line and a final empty line after a trailing newline.
std::vector<std::string_view> split_lines(std::string_view content);

}  // namespace triage::text
