#include "corsica/extract/vector.hpp"

#include <memory>

#include "corsica/extract/css.hpp"
#include "corsica/extract/image.hpp"
#include "corsica/extract/js.hpp"

namespace corsica::extract {

FeatureVector build_feature_vector(const corpus::ServiceFileSet& set, const ExtractOptions& options,
                                   Diagnostics* diag) {
  FeatureVector vec{set.service, {}};
  for (const auto& [path, entry] : set.files) {
    std::optional<Feature> f;
    switch (entry.type) {
      case FileType::image: f = extract_image_feature(path, entry.bytes, diag); break;
      case FileType::css: f = extract_css_features(path, entry.bytes, options, diag); break;
      case FileType::js: f = extract_js_features(path, entry.bytes, options, diag); break;
      case FileType::other: break;
    }
    if (f) vec.features.push_back(std::move(*f));
  }
  return vec;
}

FeatureVector normalize_vector(const FeatureVector& vector, const CompatOracle& oracle, NormalizeStats* stats) {
  FeatureVector out{vector.service, {}};
  NormalizeStats local;
  for (Feature f : vector.features) {
    f.compat.resize(f.subfeatures.size(), Compat::verified);
    for (std::size_t i = 0; i < f.subfeatures.size(); ++i) {
      if (f.compat[i] == Compat::verified && !oracle(vector.service, f.path, f.subfeatures[i])) {
        f.compat[i] = Compat::unverifiable;
        ++local.flagged;
      }
    }
    if (f.verified_count() == 0) {
      ++local.dropped_features;
      continue;
    }
    out.features.push_back(std::move(f));
  }
  if (stats) *stats = local;
  return out;
}

CompatOracle report_oracle(std::vector<UnverifiableEntry> entries) {
  auto shared = std::make_shared<const std::vector<UnverifiableEntry>>(std::move(entries));
  return [shared](const ServiceId& service, const std::string& path, const Subfeature& sub) {
    for (const auto& e : *shared) {
      if (e.path == path && e.subfeature == sub && (!e.service || *e.service == service)) return false;
    }
    return true;
  };
}

}  // namespace corsica::extract
