#include "corsica/corpus/ingest.hpp"

#include <fstream>
#include <iterator>
#include <system_error>

#include "corsica/error.hpp"

namespace fs = std::filesystem;

namespace corsica::corpus {

namespace {

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IngestError("cannot read " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

bool is_real_directory(const fs::path& path) {
  std::error_code ec;
  return fs::symlink_status(path, ec).type() == fs::file_type::directory;
}

ServiceFileSet ingest_tree(const fs::path& root, const ServiceId& service, Provenance provenance) {
  validate(service);
  if (!is_real_directory(root)) throw IngestError("not a readable directory: " + root.string());

  ServiceFileSet set{service, provenance, {}};
  std::error_code ec;
  fs::recursive_directory_iterator it(root, fs::directory_options::none, ec);
  if (ec) throw IngestError("cannot read " + root.string() + ": " + ec.message());
  for (const fs::recursive_directory_iterator end; it != end; it.increment(ec)) {
    if (ec) throw IngestError("cannot walk " + root.string() + ": " + ec.message());
    if (it->symlink_status().type() != fs::file_type::regular) continue;
    auto web_path = it->path().lexically_relative(root).generic_string();
    if (!is_valid_web_path(web_path)) continue;
    set.add(std::move(web_path), read_file(it->path()));
  }
  if (ec) throw IngestError("cannot walk " + root.string() + ": " + ec.message());
  return set;
}

}  // namespace

ServiceFileSet ingest_install_tree(const fs::path& root, const ServiceId& service) {
  return ingest_tree(root, service, Provenance::install);
}

fs::path locate_webroot(const fs::path& rootfs, const std::optional<fs::path>& hint) {
  if (!is_real_directory(rootfs)) throw IngestError("not a readable directory: " + rootfs.string());
  if (hint) {
    auto candidate = rootfs / hint->relative_path();
    if (!is_real_directory(candidate)) {
      throw IngestError("webroot not found: hint " + hint->generic_string() + " is not a directory");
    }
    return candidate;
  }
  for (auto name : kWebrootCandidates) {
    auto candidate = rootfs / fs::path(name);
    if (is_real_directory(candidate)) return candidate;
  }
  throw IngestError("webroot not found under " + rootfs.string());
}

ServiceFileSet ingest_firmware_root(const fs::path& rootfs, const std::optional<fs::path>& webroot_hint,
                                    const ServiceId& service) {
  return ingest_tree(locate_webroot(rootfs, webroot_hint), service, Provenance::firmware);
}

}  // namespace corsica::corpus
