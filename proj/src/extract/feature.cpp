#include "corsica/extract/feature.hpp"

#include <algorithm>

namespace corsica::extract {

std::vector<Subfeature> Feature::verified() const {
  std::vector<Subfeature> out;
  for (std::size_t i = 0; i < subfeatures.size(); ++i) {
    if (i >= compat.size() || compat[i] == Compat::verified) out.push_back(subfeatures[i]);
  }
  return out;
}

std::size_t Feature::verified_count() const {
  std::size_t n = 0;
  for (std::size_t i = 0; i < subfeatures.size(); ++i) {
    if (i >= compat.size() || compat[i] == Compat::verified) ++n;
  }
  return n;
}

Feature make_feature(std::string path, FileType filetype, std::vector<Subfeature> subfeatures) {
  Feature f{std::move(path), filetype, std::move(subfeatures), {}};
  f.compat.assign(f.subfeatures.size(), Compat::verified);
  return f;
}

const Feature* FeatureVector::find(std::string_view path) const {
  auto it = std::lower_bound(features.begin(), features.end(), path,
                             [](const Feature& f, std::string_view p) { return f.path < p; });
  return it != features.end() && it->path == path ? &*it : nullptr;
}

FileType filetype_of(const Subfeature& sub) {
  switch (sub.index()) {
    case 0: return FileType::image;
    case 1: return FileType::css;
    default: return FileType::js;
  }
}

bool satisfies(const Subfeature& observed, const Subfeature& expected) {
  if (observed.index() != expected.index()) return false;
  if (const auto* want = std::get_if<JsSymbol>(&expected)) {
    const auto& have = std::get<JsSymbol>(observed);
    if (have.name != want->name || have.kind != want->kind) return false;
    if (want->expected_value && have.expected_value != want->expected_value) return false;
    if (want->source_hash && have.source_hash != want->source_hash) return false;
    return true;
  }
  return observed == expected;
}

std::string_view to_string(SelectorKind kind) {
  switch (kind) {
    case SelectorKind::type: return "type";
    case SelectorKind::class_name: return "class";
    case SelectorKind::id: return "id";
  }
  return "id";
}

std::string_view to_string(SymbolKind kind) {
  return kind == SymbolKind::function ? "function" : "variable";
}

std::string_view to_string(Compat compat) {
  return compat == Compat::verified ? "verified" : "unverifiable";
}

std::optional<SelectorKind> parse_selector_kind(std::string_view text) {
  if (text == "type") return SelectorKind::type;
  if (text == "class") return SelectorKind::class_name;
  if (text == "id") return SelectorKind::id;
  return std::nullopt;
}

std::optional<SymbolKind> parse_symbol_kind(std::string_view text) {
  if (text == "function") return SymbolKind::function;
  if (text == "variable") return SymbolKind::variable;
  return std::nullopt;
}

std::optional<Compat> parse_compat(std::string_view text) {
  if (text == "verified") return Compat::verified;
  if (text == "unverifiable") return Compat::unverifiable;
  return std::nullopt;
}

std::string describe(const Subfeature& sub) {
  if (const auto* img = std::get_if<ImageDimension>(&sub)) {
    return "img " + std::to_string(img->width) + "x" + std::to_string(img->height);
  }
  if (const auto* css = std::get_if<CssDirective>(&sub)) {
    std::string sel = css->selector_kind == SelectorKind::id           ? "#"
                      : css->selector_kind == SelectorKind::class_name ? "."
                                                                       : "";
    return "css " + sel + css->selector_name + " " + css->property + "=" + css->expected_value;
  }
  const auto& js = std::get<JsSymbol>(sub);
  std::string out = "js " + std::string(to_string(js.kind)) + " " + js.name;
  if (js.expected_value) out += "=" + *js.expected_value;
  if (js.source_hash) out += " #" + js.source_hash->substr(0, 12);
  return out;
}

}  // namespace corsica::extract
