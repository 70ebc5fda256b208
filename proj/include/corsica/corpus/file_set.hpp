#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "corsica/service_id.hpp"

namespace corsica::corpus {

enum class FileType { image, css, js, other };
enum class Provenance { install, firmware, crawl };

std::string_view to_string(FileType type);
std::string_view to_string(Provenance provenance);
std::optional<FileType> parse_file_type(std::string_view text);
std::optional<Provenance> parse_provenance(std::string_view text);

/// Lowercased extension of the last path segment, query string ignored.
/// Empty when the segment has no '.'.
std::string extension_of(std::string_view web_path);

/// Extension table: png gif jpg jpeg svg ico bmp webp -> image, css -> css,
/// js mjs -> js, anything else -> other.
FileType file_type_for(std::string_view web_path);

/// Web paths are '/'-separated, relative (no leading '/'), non-empty, and
/// contain no empty, "." or ".." segments. A query string may follow.
bool is_valid_web_path(std::string_view web_path);

struct FileEntry {
  FileType type = FileType::other;
  std::string bytes;

  bool operator==(const FileEntry&) const = default;
};

/// Files of one service keyed by web path.
struct ServiceFileSet {
  ServiceId service;
  Provenance provenance = Provenance::install;
  std::map<std::string, FileEntry> files;

  /// Adds or replaces a file; the type is derived from the path.
  void add(std::string web_path, std::string bytes);
  const FileEntry* find(std::string_view web_path) const;

  bool operator==(const ServiceFileSet&) const = default;
};

/// Extension -> file count, ".php" style keys; files without an extension
/// are counted under "".
struct FileTypeHistogram {
  std::map<std::string, std::uint64_t> counts;

  void add(std::string_view web_path) { ++counts[extension_key(web_path)]; }
  void merge(const FileTypeHistogram& other);
  std::uint64_t total() const;

  /// Entries by descending count, ties by extension.
  std::vector<std::pair<std::string, std::uint64_t>> ranked() const;

  static std::string extension_key(std::string_view web_path);
};

FileTypeHistogram corpus_stats(std::span<const ServiceFileSet> corpus);

}  // namespace corsica::corpus
