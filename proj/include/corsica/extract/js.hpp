#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "corsica/extract/feature.hpp"

namespace corsica::extract {

/// Canonical form of a JavaScript string, number or boolean literal as
/// written in source ("'a'" for "\"a\"", "1000" for "1e3", "-5" for "- 5").
/// Nothing for anything else (null, regexes, BigInts, expressions).
std::optional<std::string> canonical_js_literal(std::string_view literal);

/// ECMAScript Number::toString.
std::string js_number_to_string(double value);

/// Global bindings left once the script has run, in order of first
/// appearance. Only top-level statements are considered: function
/// declarations, var/let/const declarators and plain assignments to a name
/// (or to window./self./globalThis.<name>). Nothing when the source does not
/// tokenize.
std::optional<std::vector<JsSymbol>> resolve_js_symbols(std::string_view source,
                                                        Diagnostics* diag = nullptr);

/// The first `max_subfeatures` resolved symbols as one Feature.
std::optional<Feature> extract_js_features(std::string_view path, std::string_view bytes,
                                           const ExtractOptions& options = {},
                                           Diagnostics* diag = nullptr);

}  // namespace corsica::extract
