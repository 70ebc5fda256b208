#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace corsica {

/// Dotted version: 1-4 numeric segments plus an optional trailing token
/// ("4.7.6", "1.2.0-beta1", "5.0rc1").
struct Version {
  std::vector<std::uint64_t> segments;
  std::string suffix;

  static std::optional<Version> parse(std::string_view text);
  std::string str() const;
};

/// Segments compare componentwise with missing segments read as 0; the
/// suffix breaks ties lexicographically.
std::strong_ordering compare_versions(const Version& a, const Version& b);
bool operator==(const Version& a, const Version& b);
inline std::strong_ordering operator<=>(const Version& a, const Version& b) {
  return compare_versions(a, b);
}

/// Identity of one fingerprintable unit: a whole service when `component`
/// is empty, otherwise one component (plugin) of it.
struct ServiceId {
  std::string vendor;
  std::string product;
  std::string version;    // may be empty for unversioned devices
  std::string component;  // empty for whole services

  /// "vendor:product:version[:component]"
  static ServiceId parse(std::string_view spec);
  std::string str() const;

  /// Filesystem-safe directory name; distinct ids map to distinct slugs.
  std::string slug() const;

  std::optional<Version> parsed_version() const { return Version::parse(version); }

  auto operator<=>(const ServiceId&) const = default;
};

/// Throws DataError when the id violates its field invariants.
void validate(const ServiceId& id);

}  // namespace corsica
