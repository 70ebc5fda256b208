#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "corsica/extract/feature.hpp"

namespace corsica::extract {

/// Longhand properties whose computed values serialize the same across
/// engines.
bool is_whitelisted_property(std::string_view property);

/// Canonical computed-value form of `value` for `property`, or nothing when
/// the value is not statically decidable (non-px lengths, currentcolor,
/// var(), unknown keywords, ...).
///   colors   -> "rgb(r, g, b)" / "rgba(r, g, b, a)"
///   lengths  -> "<n>px" with n in shortest decimal form
///   keywords -> lowercase
std::optional<std::string> canonical_css_value(std::string_view property, std::string_view value);

/// Every directive a probe element would observe, after the cascade among
/// single simple-selector rules (later wins, !important beats normal).
/// Declarations also touched by a compound/complex selector or an
/// @media-style conditional block are dropped as undecidable. Ordered id
/// selectors first, then classes, then types; document order within a group.
std::vector<CssDirective> resolve_css_directives(std::string_view css, Diagnostics* diag = nullptr);

/// The first `max_subfeatures` resolved directives as one Feature.
std::optional<Feature> extract_css_features(std::string_view path, std::string_view bytes,
                                            const ExtractOptions& options = {},
                                            Diagnostics* diag = nullptr);

}  // namespace corsica::extract
