#include "json_codec.hpp"

#include <set>

namespace corsica {

using namespace extract;

namespace {

bool valid_identifier(const std::string& name) {
  if (name.empty() || std::isdigit(static_cast<unsigned char>(name[0]))) return false;
  for (unsigned char c : name) {
    if (!(std::isalnum(c) || c == '_' || c == '$' || c >= 0x80)) return false;
  }
  return true;
}

std::string required_string(const Json& j, const char* key) {
  const auto& v = j.at(key);
  if (!v.is_string()) throw SchemaError(std::string("field '") + key + "' must be a string");
  return v.get<std::string>();
}

}  // namespace

Json subfeature_to_json(const Subfeature& sub) {
  if (const auto* img = std::get_if<ImageDimension>(&sub)) {
    return Json{{"type", "image"}, {"width", img->width}, {"height", img->height}};
  }
  if (const auto* css = std::get_if<CssDirective>(&sub)) {
    return Json{{"type", "css"},
                {"selector_kind", to_string(css->selector_kind)},
                {"selector_name", css->selector_name},
                {"element_type", css->element_type},
                {"property", css->property},
                {"expected_value", css->expected_value}};
  }
  const auto& js = std::get<JsSymbol>(sub);
  Json j{{"type", "js"}, {"name", js.name}, {"kind", to_string(js.kind)}};
  if (js.expected_value) j["expected_value"] = *js.expected_value;
  if (js.source_hash) j["source_hash"] = *js.source_hash;
  return j;
}

Subfeature subfeature_from_json(const Json& j) {
  if (!j.is_object()) throw SchemaError("subfeature must be an object");
  const auto type = required_string(j, "type");
  if (type == "image") {
    const auto w = j.at("width").get<std::int64_t>();
    const auto h = j.at("height").get<std::int64_t>();
    if (w <= 0 || h <= 0 || w > UINT32_MAX || h > UINT32_MAX) throw SchemaError("image size must be positive");
    return ImageDimension{static_cast<std::uint32_t>(w), static_cast<std::uint32_t>(h)};
  }
  if (type == "css") {
    auto kind = parse_selector_kind(required_string(j, "selector_kind"));
    if (!kind) throw SchemaError("unknown selector_kind");
    CssDirective d{*kind, required_string(j, "selector_name"), required_string(j, "element_type"),
                   required_string(j, "property"), required_string(j, "expected_value")};
    if (d.selector_name.empty() || d.element_type.empty() || d.property.empty()) {
      throw SchemaError("css subfeature has an empty field");
    }
    return d;
  }
  if (type == "js") {
    auto kind = parse_symbol_kind(required_string(j, "kind"));
    if (!kind) throw SchemaError("unknown symbol kind");
    JsSymbol s{required_string(j, "name"), *kind, std::nullopt, std::nullopt};
    if (!valid_identifier(s.name)) throw SchemaError("invalid symbol name '" + s.name + "'");
    if (j.contains("expected_value")) s.expected_value = required_string(j, "expected_value");
    if (j.contains("source_hash")) s.source_hash = required_string(j, "source_hash");
    return s;
  }
  throw SchemaError("unknown subfeature type '" + type + "'");
}

Json feature_to_json(const Feature& f) {
  Json subs = Json::array();
  Json compat = Json::array();
  for (std::size_t i = 0; i < f.subfeatures.size(); ++i) {
    subs.push_back(subfeature_to_json(f.subfeatures[i]));
    compat.push_back(to_string(i < f.compat.size() ? f.compat[i] : Compat::verified));
  }
  return Json{{"path", f.path},
              {"filetype", corpus::to_string(f.filetype)},
              {"subfeatures", std::move(subs)},
              {"compat", std::move(compat)}};
}

Feature feature_from_json(const Json& j) {
  if (!j.is_object()) throw SchemaError("feature must be an object");
  Feature f;
  f.path = required_string(j, "path");
  if (!corpus::is_valid_web_path(f.path)) throw SchemaError("bad feature path '" + f.path + "'");
  auto type = corpus::parse_file_type(required_string(j, "filetype"));
  if (!type || *type == FileType::other) throw SchemaError("bad filetype for '" + f.path + "'");
  f.filetype = *type;
  for (const auto& s : j.at("subfeatures")) {
    f.subfeatures.push_back(subfeature_from_json(s));
    if (filetype_of(f.subfeatures.back()) != f.filetype) {
      throw SchemaError("subfeature type does not match filetype of '" + f.path + "'");
    }
  }
  if (f.subfeatures.empty()) throw SchemaError("feature '" + f.path + "' has no subfeatures");
  if (j.contains("compat")) {
    for (const auto& c : j.at("compat")) {
      auto flag = parse_compat(c.get<std::string>());
      if (!flag) throw SchemaError("unknown compat flag");
      f.compat.push_back(*flag);
    }
    if (f.compat.size() != f.subfeatures.size()) throw SchemaError("compat list length mismatch");
  } else {
    f.compat.assign(f.subfeatures.size(), Compat::verified);
  }
  return f;
}

Json vector_to_json(const FeatureVector& v) {
  Json features = Json::array();
  for (const auto& f : v.features) features.push_back(feature_to_json(f));
  return Json{{"service", service_to_json(v.service)}, {"features", std::move(features)}};
}

FeatureVector vector_from_json(const Json& j) {
  if (!j.is_object()) throw SchemaError("feature vector must be an object");
  FeatureVector v{service_from_json(j.at("service")), {}};
  for (const auto& f : j.at("features")) v.features.push_back(feature_from_json(f));
  for (std::size_t i = 1; i < v.features.size(); ++i) {
    if (!(v.features[i - 1].path < v.features[i].path)) {
      throw SchemaError("features of " + v.service.str() + " not ordered by unique path");
    }
  }
  return v;
}

}  // namespace corsica
