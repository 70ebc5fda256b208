#pragma once

// JSON mappings shared by the serializers. Kept out of the public headers so
// only the translation units that serialize pay for nlohmann/json.

#include <json.hpp>

#include "corsica/error.hpp"
#include "corsica/extract/feature.hpp"
#include "corsica/service_id.hpp"

namespace corsica {

using Json = nlohmann::json;

inline Json service_to_json(const ServiceId& id) {
  return Json{{"vendor", id.vendor},
              {"product", id.product},
              {"version", id.version},
              {"component", id.component}};
}

inline ServiceId service_from_json(const Json& j) {
  if (!j.is_object()) throw SchemaError("service id must be an object");
  ServiceId id{j.at("vendor").get<std::string>(), j.at("product").get<std::string>(),
               j.value("version", std::string{}), j.value("component", std::string{})};
  validate(id);
  return id;
}

/// Deterministic text form used for every artifact we write.
inline std::string dump_json(const Json& j) { return j.dump(2) + "\n"; }

/// Parses text, turning library exceptions into SchemaError.
inline Json parse_json(std::string_view text, std::string_view what) {
  try {
    return Json::parse(text);
  } catch (const Json::exception& e) {
    throw SchemaError(std::string(what) + ": " + e.what());
  }
}

// Feature payloads; definitions in json_codec.cpp. The *_from_json
// functions throw SchemaError on malformed input.
Json subfeature_to_json(const extract::Subfeature& sub);
extract::Subfeature subfeature_from_json(const Json& j);
Json feature_to_json(const extract::Feature& f);
extract::Feature feature_from_json(const Json& j);
Json vector_to_json(const extract::FeatureVector& v);
extract::FeatureVector vector_from_json(const Json& j);

/// Runs `fn`, rethrowing library errors as SchemaError prefixed by `what`.
template <typename Fn>
auto with_schema_context(std::string_view what, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const Json::exception& e) {
    throw SchemaError(std::string(what) + ": " + e.what());
  }
}

}  // namespace corsica
