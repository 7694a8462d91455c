#pragma once

#include <filesystem>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace csd::io {

/// Shortest decimal text that parses back to the same double ("0.85", "4", "1e-07").
std::string format_double(double value);

std::string read_file(const std::filesystem::path& path);

/// Writes to a sibling temp file and renames it over `path`, so readers
/// never observe a partially written output.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

/// Calls `fn(line, line_number)` for each line (1-based), without the trailing
/// newline or carriage return.
void for_each_line(std::string_view text,
                   const std::function<void(std::string_view, std::size_t)>& fn);

std::string csv_escape(std::string_view field);

/// RFC 4180 field splitting for a single physical line.
std::vector<std::string> split_csv_line(std::string_view line);

std::string_view trim(std::string_view s);

}  // namespace csd::io
