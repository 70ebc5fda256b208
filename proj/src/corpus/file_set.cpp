#include "corsica/corpus/file_set.hpp"

#include <algorithm>
#include <array>
#include <cctype>

#include "corsica/error.hpp"

namespace corsica::corpus {

namespace {

constexpr std::array<std::string_view, 8> kImageExtensions{"png", "gif", "jpg", "jpeg",
                                                           "svg", "ico", "bmp", "webp"};

std::string_view strip_query(std::string_view path) {
  auto q = path.find('?');
  return q == std::string_view::npos ? path : path.substr(0, q);
}

}  // namespace

std::string_view to_string(FileType type) {
  switch (type) {
    case FileType::image: return "image";
    case FileType::css: return "css";
    case FileType::js: return "js";
    case FileType::other: return "other";
  }
  return "other";
}

std::string_view to_string(Provenance provenance) {
  switch (provenance) {
    case Provenance::install: return "install";
    case Provenance::firmware: return "firmware";
    case Provenance::crawl: return "crawl";
  }
  return "install";
}

std::optional<FileType> parse_file_type(std::string_view text) {
  if (text == "image") return FileType::image;
  if (text == "css") return FileType::css;
  if (text == "js") return FileType::js;
  if (text == "other") return FileType::other;
  return std::nullopt;
}

std::optional<Provenance> parse_provenance(std::string_view text) {
  if (text == "install") return Provenance::install;
  if (text == "firmware") return Provenance::firmware;
  if (text == "crawl") return Provenance::crawl;
  return std::nullopt;
}

std::string extension_of(std::string_view web_path) {
  auto path = strip_query(web_path);
  auto slash = path.rfind('/');
  auto name = slash == std::string_view::npos ? path : path.substr(slash + 1);
  auto dot = name.rfind('.');
  if (dot == std::string_view::npos) return {};
  std::string ext(name.substr(dot + 1));
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return ext;
}

FileType file_type_for(std::string_view web_path) {
  const auto ext = extension_of(web_path);
  if (std::find(kImageExtensions.begin(), kImageExtensions.end(), ext) != kImageExtensions.end()) {
    return FileType::image;
  }
  if (ext == "css") return FileType::css;
  if (ext == "js" || ext == "mjs") return FileType::js;
  return FileType::other;
}

bool is_valid_web_path(std::string_view web_path) {
  auto path = strip_query(web_path);
  if (path.empty() || path.front() == '/') return false;
  std::size_t start = 0;
  while (start <= path.size()) {
    auto end = path.find('/', start);
    if (end == std::string_view::npos) end = path.size();
    auto segment = path.substr(start, end - start);
    if (segment.empty() || segment == "." || segment == "..") return false;
    start = end + 1;
  }
  return path.find('\\') == std::string_view::npos;
}

void ServiceFileSet::add(std::string web_path, std::string bytes) {
  if (!is_valid_web_path(web_path)) throw DataError("invalid web path '" + web_path + "'");
  const auto type = file_type_for(web_path);
  files.insert_or_assign(std::move(web_path), FileEntry{type, std::move(bytes)});
}

const FileEntry* ServiceFileSet::find(std::string_view web_path) const {
  auto it = files.find(std::string(web_path));
  return it == files.end() ? nullptr : &it->second;
}

std::string FileTypeHistogram::extension_key(std::string_view web_path) {
  auto ext = extension_of(web_path);
  return ext.empty() ? std::string{} : "." + ext;
}

void FileTypeHistogram::merge(const FileTypeHistogram& other) {
  for (const auto& [ext, n] : other.counts) counts[ext] += n;
}

std::uint64_t FileTypeHistogram::total() const {
  std::uint64_t sum = 0;
  for (const auto& [ext, n] : counts) sum += n;
  return sum;
}

std::vector<std::pair<std::string, std::uint64_t>> FileTypeHistogram::ranked() const {
  std::vector<std::pair<std::string, std::uint64_t>> out(counts.begin(), counts.end());
  std::stable_sort(out.begin(), out.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  return out;
}

FileTypeHistogram corpus_stats(std::span<const ServiceFileSet> corpus) {
  FileTypeHistogram hist;
  for (const auto& set : corpus) {
    for (const auto& [path, entry] : set.files) hist.add(path);
  }
  return hist;
}

}  // namespace corsica::corpus
