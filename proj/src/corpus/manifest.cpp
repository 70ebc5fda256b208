#include "corsica/corpus/manifest.hpp"

#include <algorithm>
#include <set>
#include <system_error>

#include "../json_codec.hpp"
#include "corsica/hash.hpp"
#include "corsica/io.hpp"

namespace fs = std::filesystem;

namespace corsica::corpus {

namespace {

Json manifest(const ServiceFileSet& set) {
  Json files = Json::array();
  for (const auto& [path, entry] : set.files) {
    files.push_back(Json{{"path", path},
                         {"type", to_string(entry.type)},
                         {"sha256", sha256_hex(entry.bytes)},
                         {"size", entry.bytes.size()}});
  }
  return Json{{"service", service_to_json(set.service)},
              {"provenance", to_string(set.provenance)},
              {"files", std::move(files)}};
}

}  // namespace

std::string manifest_json(const ServiceFileSet& set) { return dump_json(manifest(set)); }

void save_file_set(const ServiceFileSet& set, const fs::path& dir) {
  const auto blobs = dir / "blobs";
  fs::create_directories(blobs);
  std::set<std::string> referenced;
  for (const auto& [path, entry] : set.files) {
    auto digest = sha256_hex(entry.bytes);
    auto blob = blobs / digest;
    if (!fs::exists(blob)) write_file_atomic(blob, entry.bytes);
    referenced.insert(std::move(digest));
  }
  // Drop blobs left over from an earlier ingest of the same service.
  for (const auto& e : fs::directory_iterator(blobs)) {
    if (!referenced.count(e.path().filename().string())) fs::remove(e.path());
  }
  write_file_atomic(dir / "manifest.json", manifest_json(set));
}

ServiceFileSet load_file_set(const fs::path& dir_or_manifest) {
  const bool is_manifest = dir_or_manifest.filename() == "manifest.json";
  const auto dir = is_manifest ? dir_or_manifest.parent_path() : dir_or_manifest;
  const auto j = parse_json(read_file(dir / "manifest.json"), (dir / "manifest.json").string());
  try {
    ServiceFileSet set;
    set.service = service_from_json(j.at("service"));
    auto provenance = parse_provenance(j.at("provenance").get<std::string>());
    if (!provenance) throw SchemaError("unknown provenance in " + dir.string());
    set.provenance = *provenance;
    for (const auto& f : j.at("files")) {
      auto path = f.at("path").get<std::string>();
      auto digest = f.at("sha256").get<std::string>();
      auto type = parse_file_type(f.at("type").get<std::string>());
      if (!is_valid_web_path(path) || !type || *type != file_type_for(path)) {
        throw SchemaError("bad file entry '" + path + "' in " + dir.string());
      }
      auto bytes = read_file(dir / "blobs" / digest);
      if (bytes.size() != f.at("size").get<std::size_t>() || sha256_hex(bytes) != digest) {
        throw SchemaError("blob mismatch for '" + path + "' in " + dir.string());
      }
      if (set.files.count(path)) throw SchemaError("duplicate path '" + path + "'");
      set.files.emplace(std::move(path), FileEntry{*type, std::move(bytes)});
    }
    return set;
  } catch (const Json::exception& e) {
    throw SchemaError(dir.string() + "/manifest.json: " + e.what());
  }
}

fs::path add_to_corpus(const fs::path& corpus_dir, const ServiceFileSet& set) {
  validate(set.service);
  const auto dir = corpus_dir / set.service.slug();
  if (fs::exists(dir / "manifest.json")) {
    auto existing = load_file_set(dir);
    if (existing.service != set.service) {
      throw DataError(dir.string() + " already holds " + existing.service.str());
    }
  }
  save_file_set(set, dir);
  return dir;
}

std::vector<ServiceFileSet> load_corpus(const fs::path& corpus_dir) {
  std::error_code ec;
  if (!fs::is_directory(corpus_dir, ec)) throw DataError("not a corpus directory: " + corpus_dir.string());
  std::vector<fs::path> dirs;
  for (const auto& e : fs::directory_iterator(corpus_dir)) {
    if (e.is_directory() && fs::exists(e.path() / "manifest.json")) dirs.push_back(e.path());
  }
  std::vector<ServiceFileSet> out;
  out.reserve(dirs.size());
  for (const auto& d : dirs) out.push_back(load_file_set(d));
  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) { return a.service < b.service; });
  for (std::size_t i = 1; i < out.size(); ++i) {
    if (out[i].service == out[i - 1].service) {
      throw DataError("duplicate service " + out[i].service.str() + " in " + corpus_dir.string());
    }
  }
  return out;
}

}  // namespace corsica::corpus
