#include "triage/io.hpp"

#include <cstdint>
#include <fstream>
#include <sstream>

#include "triage/errors.hpp"
#include "triage/text.hpp"

namespace triage::io {

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open file: " + path.string());
    std::ostringstream out;
    out << in.rdbuf();
    if (in.bad()) throw IoError("read failed: " + path.string());
    return std::move(out).str();
}

void atomic_write(const std::filesystem::path& path, std::string_view content) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open file for writing: " + tmp.string());
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out) {
            std::error_code ec;
            std::filesystem::remove(tmp, ec);
            throw IoError("write failed: " + tmp.string());
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw IoError("rename failed: " + path.string());
    }
}

CsvTable read_csv(const std::filesystem::path& path, std::string_view expected_header) {
    std::string content = read_file(path);
    auto lines = text::split_lines(content);
    if (lines.empty()) throw MalformedCsv(path.string() + ": empty file, expected header '" +
                                          std::string(expected_header) + "'");
    if (lines[0] != expected_header)
        throw MalformedCsv(path.string() + ": bad header '" + std::string(lines[0]) +
                           "', expected '" + std::string(expected_header) + "'");
    std::size_t arity = text::split(expected_header, ',').size();

    CsvTable table;
    for (auto field : text::split(expected_header, ','))
        table.header.emplace_back(field);
    for (std::size_t ln = 1; ln < lines.size(); ++ln) {
        auto fields = text::split(lines[ln], ',');
        if (fields.size() != arity)
            throw MalformedCsv(path.string() + ":" + std::to_string(ln + 1) + ": expected " +
                               std::to_string(arity) + " fields, got " +
                               std::to_string(fields.size()));
        std::vector<std::string> row;
        row.reserve(arity);
        for (auto field : fields) row.emplace_back(field);
        table.rows.push_back(std::move(row));
    }
    return table;
}

std::string fnv1a64_hex(std::string_view bytes) {
    std::uint64_t h = 0xCBF29CE484222325ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001B3ull;
    }
    static const char* digits = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = digits[h & 0xF];
        h >>= 4;
    }
    return out;
}

std::string digest_file(const std::filesystem::path& path) {
    return "fnv1a64:" + fnv1a64_hex(read_file(path));
}

}  // namespace triage::io
