#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "corsica/corpus/file_set.hpp"
#include "corsica/extract/feature.hpp"

namespace corsica::extract {

/// Runs the image, CSS and script extractors over every eligible file.
/// Features come out ordered by path.
FeatureVector build_feature_vector(const corpus::ServiceFileSet& set, const ExtractOptions& options = {},
                                   Diagnostics* diag = nullptr);

/// Decides whether a probe could verify `sub` on the file at `path` of
/// `service`.
using CompatOracle =
    std::function<bool(const ServiceId& service, const std::string& path, const Subfeature& sub)>;

struct NormalizeStats {
  std::size_t flagged = 0;           // subfeatures newly marked unverifiable
  std::size_t dropped_features = 0;  // features left with nothing verified
};

/// Re-checks every verified subfeature with `oracle`, flags rejects as
/// unverifiable and drops features with no verified subfeature left.
FeatureVector normalize_vector(const FeatureVector& vector, const CompatOracle& oracle,
                               NormalizeStats* stats = nullptr);

/// One subfeature a compatibility report marked as not verifiable. Without
/// a service the entry applies to every service.
struct UnverifiableEntry {
  std::optional<ServiceId> service;
  std::string path;
  Subfeature subfeature;
};

/// Oracle rejecting exactly the listed entries.
CompatOracle report_oracle(std::vector<UnverifiableEntry> entries);

}  // namespace corsica::extract
