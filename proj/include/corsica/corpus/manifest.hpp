#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "corsica/corpus/file_set.hpp"

namespace corsica::corpus {

// On-disk form of a ServiceFileSet:
//   <dir>/manifest.json   {service, provenance, files: [{path, type, sha256, size}]}
//   <dir>/blobs/<sha256>  file bytes
// A corpus directory holds one such directory per service, named by slug.

std::string manifest_json(const ServiceFileSet& set);

void save_file_set(const ServiceFileSet& set, const std::filesystem::path& dir);

/// Accepts the set directory or its manifest.json. Blob sizes and digests
/// are verified.
ServiceFileSet load_file_set(const std::filesystem::path& dir_or_manifest);

/// Saves into <corpus_dir>/<slug> and returns that directory.
std::filesystem::path add_to_corpus(const std::filesystem::path& corpus_dir, const ServiceFileSet& set);

/// All sets under `corpus_dir`, ordered by ServiceId.
std::vector<ServiceFileSet> load_corpus(const std::filesystem::path& corpus_dir);

}  // namespace corsica::corpus
