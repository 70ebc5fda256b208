#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "corsica/extract/feature.hpp"
#include "corsica/service_id.hpp"

namespace corsica::store {

inline constexpr int kSchemaVersion = 1;
inline constexpr std::string_view kToolchainVersion = "0.1.0";

enum class VulnClass { rce, xss, sqli, other };

std::string_view to_string(VulnClass c);
std::optional<VulnClass> parse_vuln_class(std::string_view text);

/// Known vulnerability of every version in [introduced, fixed) of one
/// vendor/product/component. An empty bound is open on that side.
struct VulnRecord {
  std::string vendor;
  std::string product;
  std::string component;
  std::string introduced;
  std::string fixed;
  VulnClass vuln_class = VulnClass::other;
  std::string reference;

  /// Same vendor/product/component and version inside the range. Services
  /// without a parseable version match only fully open ranges.
  bool matches(const ServiceId& service) const;
  bool same_target(const ServiceId& service) const;

  bool operator==(const VulnRecord&) const = default;
};

/// Throws SchemaError when a bound does not parse or the range is empty.
void validate(const VulnRecord& record);

/// [introduced, fixed) containment; empty bounds are open.
bool version_in_range(const Version& v, std::string_view introduced, std::string_view fixed);

struct Metadata {
  std::string created;  // empty unless SOURCE_DATE_EPOCH or the caller sets it
  std::string toolchain_version{kToolchainVersion};
  std::string source;   // where the vectors came from, free text

  bool operator==(const Metadata&) const = default;
};

struct CorpusDb {
  std::vector<extract::FeatureVector> vectors;  // ordered by service, unique
  std::vector<VulnRecord> vulns;
  Metadata metadata;

  const extract::FeatureVector* find(const ServiceId& service) const;

  bool operator==(const CorpusDb&) const = default;
};

/// Sorts vectors by service; throws DataError on duplicate services.
CorpusDb make_db(std::vector<extract::FeatureVector> vectors, Metadata metadata = {});

/// Metadata stamped with SOURCE_DATE_EPOCH when set, so rebuilds stay
/// byte-identical.
Metadata default_metadata(std::string source = {});

std::string serialize_db(const CorpusDb& db);
CorpusDb parse_db(std::string_view text);

/// Whole-file atomic write.
void save_db(const CorpusDb& db, const std::filesystem::path& path);
CorpusDb load_db(const std::filesystem::path& path);

/// JSON list of {vendor, product, component, introduced, fixed, class, reference}.
std::vector<VulnRecord> parse_vuln_records(std::string_view text);
std::vector<VulnRecord> load_vuln_records(const std::filesystem::path& path);

struct Annotated {
  CorpusDb db;
  std::vector<std::string> dangling;  // one warning per record naming no known product
};

/// Appends `records` (skipping exact duplicates) and reports those whose
/// vendor/product/component has no vector in the db.
Annotated annotate_vulns(CorpusDb db, const std::vector<VulnRecord>& records);

struct ClusterVulns {
  std::vector<std::pair<ServiceId, VulnRecord>> matches;
  bool actionable = false;  // every member matches some record
  bool partial = false;     // some but not all members match
};

ClusterVulns vulns_for_cluster(const CorpusDb& db, std::span<const ServiceId> cluster);

}  // namespace corsica::store
