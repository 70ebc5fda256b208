#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "corsica/corpus/file_set.hpp"
#include "corsica/service_id.hpp"

namespace corsica::extract {

using corpus::FileType;

/// Image size, readable across origins through naturalWidth/naturalHeight.
struct ImageDimension {
  std::uint32_t width = 0;
  std::uint32_t height = 0;

  auto operator<=>(const ImageDimension&) const = default;
};

enum class SelectorKind { type, class_name, id };

/// A declaration applied to a probe element: instantiate `element_type`
/// carrying the selector's id/class, read `property` through
/// getComputedStyle, compare with `expected_value`.
struct CssDirective {
  SelectorKind selector_kind = SelectorKind::id;
  std::string selector_name;
  std::string element_type;
  std::string property;
  std::string expected_value;

  auto operator<=>(const CssDirective&) const = default;
};

enum class SymbolKind { function, variable };

/// A global binding left behind by a script. `expected_value` is a
/// canonical literal ("'4.7.6'", "42", "true"); `source_hash` is the
/// SHA-256 of a function's exact source text.
struct JsSymbol {
  std::string name;
  SymbolKind kind = SymbolKind::variable;
  std::optional<std::string> expected_value;
  std::optional<std::string> source_hash;

  auto operator<=>(const JsSymbol&) const = default;
};

using Subfeature = std::variant<ImageDimension, CssDirective, JsSymbol>;

enum class Compat { verified, unverifiable };

/// One probeable file. `compat` runs parallel to `subfeatures`.
struct Feature {
  std::string path;
  FileType filetype = FileType::other;
  std::vector<Subfeature> subfeatures;
  std::vector<Compat> compat;

  /// Subfeatures flagged verified, in order.
  std::vector<Subfeature> verified() const;
  std::size_t verified_count() const;

  bool operator==(const Feature&) const = default;
};

/// Builds a feature with every subfeature flagged verified.
Feature make_feature(std::string path, FileType filetype, std::vector<Subfeature> subfeatures);

struct FeatureVector {
  ServiceId service;
  std::vector<Feature> features;  // ordered by path

  const Feature* find(std::string_view path) const;

  bool operator==(const FeatureVector&) const = default;
};

/// Filetype a subfeature variant belongs to.
FileType filetype_of(const Subfeature& sub);

/// Whether an observed subfeature satisfies an expected one. Images and CSS
/// directives compare by value; a symbol satisfies an expectation with the
/// same name and kind, and equal value/hash wherever the expectation carries
/// one.
bool satisfies(const Subfeature& observed, const Subfeature& expected);

std::string_view to_string(SelectorKind kind);
std::string_view to_string(SymbolKind kind);
std::string_view to_string(Compat compat);
std::optional<SelectorKind> parse_selector_kind(std::string_view text);
std::optional<SymbolKind> parse_symbol_kind(std::string_view text);
std::optional<Compat> parse_compat(std::string_view text);

/// Compact human-readable form, e.g. "img 16x16", "css #wp-members color=rgb(25, 130, 209)".
std::string describe(const Subfeature& sub);

/// Diagnostics collected while extracting; never fatal.
struct Diagnostics {
  std::vector<std::string> warnings;
};

struct ExtractOptions {
  std::size_t max_subfeatures = 5;
};

}  // namespace corsica::extract
