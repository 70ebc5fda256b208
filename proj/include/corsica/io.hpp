#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace corsica {

/// Whole-file read; throws DataError when the file cannot be opened.
std::string read_file(const std::filesystem::path& path);

/// Writes `content` to a sibling temp file and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

}  // namespace corsica
