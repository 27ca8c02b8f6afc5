#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace triage::io {

std::string read_file(const std::filesystem::path& path);

/// Writes to "<path>.tmp" then renames, so a failure never leaves a
/// partially written artifact at the destination.
void atomic_write(const std::filesystem::path& path, std::string_view content);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

/// Reads a CSV file and checks the header matches exactly; every row must
/// have the header's arity. Throws MalformedCsv / IoError.
CsvTable read_csv(const std::filesystem::path& path, std::string_view expected_header);

std::string fnv1a64_hex(std::string_view bytes);
std::string digest_file(const std::filesystem::path& path);  // "fnv1a64:<hex>"

}  // namespace triage::io
