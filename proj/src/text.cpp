#include "triage/text.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <system_error>

namespace triage::text {

std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::string format_fixed(double v, int precision) {
    char buf[64];
    int n = std::snprintf(buf, sizeof(buf), "%.*f", precision, v);
    return std::string(buf, buf + n);
}

std::optional<double> parse_double(std::string_view s) {
    if (s.empty()) return std::nullopt;
    double v{};
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

std::optional<long long> parse_int(std::string_view s) {
    if (s.empty()) return std::nullopt;
    long long v{};
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        std::size_t pos = line.find(sep, start);
        if (pos == std::string_view::npos) {
            out.push_back(line.substr(start));
            break;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    return out;
}

std::vector<std::string_view> split_lines(std::string_view content) {
    if (content.starts_with("\xEF\xBB\xBF")) content.remove_prefix(3);
    std::vector<std::string_view> lines;
    std::size_t start = 0;
    while (start <= content.size()) {
        std::size_t pos = content.find('\n', start);
        std::string_view line;
        if (pos == std::string_view::npos) {
            if (start == content.size()) break;  // trailing newline already consumed
            line = content.substr(start);
            start = content.size() + 1;
        } else {
            line = content.substr(start, pos - start);
            start = pos + 1;
        }
        if (line.ends_with('\r')) line.remove_suffix(1);
        lines.push_back(line);
    }
    return lines;
}

}  // namespace triage::text
