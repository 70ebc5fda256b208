#include "corsica/store/db.hpp"

#include <algorithm>
#include <cstdlib>

#include "../json_codec.hpp"
#include "corsica/io.hpp"

namespace corsica::store {

std::string_view to_string(VulnClass c) {
  switch (c) {
    case VulnClass::rce: return "rce";
    case VulnClass::xss: return "xss";
    case VulnClass::sqli: return "sqli";
    case VulnClass::other: return "other";
  }
  return "other";
}

std::optional<VulnClass> parse_vuln_class(std::string_view text) {
  if (text == "rce") return VulnClass::rce;
  if (text == "xss") return VulnClass::xss;
  if (text == "sqli") return VulnClass::sqli;
  if (text == "other") return VulnClass::other;
  return std::nullopt;
}

bool version_in_range(const Version& v, std::string_view introduced, std::string_view fixed) {
  if (!introduced.empty()) {
    auto lo = Version::parse(introduced);
    if (!lo || v < *lo) return false;
  }
  if (!fixed.empty()) {
    auto hi = Version::parse(fixed);
    if (!hi || !(v < *hi)) return false;
  }
  return true;
}

void validate(const VulnRecord& r) {
  if (r.vendor.empty() || r.product.empty()) throw SchemaError("vuln record needs vendor and product");
  std::optional<Version> lo, hi;
  if (!r.introduced.empty() && !(lo = Version::parse(r.introduced))) {
    throw SchemaError("bad introduced version '" + r.introduced + "'");
  }
  if (!r.fixed.empty() && !(hi = Version::parse(r.fixed))) {
    throw SchemaError("bad fixed version '" + r.fixed + "'");
  }
  if (lo && hi && !(*lo < *hi)) {
    throw SchemaError("empty version range [" + r.introduced + ", " + r.fixed + ")");
  }
}

bool VulnRecord::same_target(const ServiceId& s) const {
  return s.vendor == vendor && s.product == product && s.component == component;
}

bool VulnRecord::matches(const ServiceId& s) const {
  if (!same_target(s)) return false;
  auto v = s.parsed_version();
  if (!v) return introduced.empty() && fixed.empty();
  return version_in_range(*v, introduced, fixed);
}

const extract::FeatureVector* CorpusDb::find(const ServiceId& service) const {
  auto it = std::lower_bound(vectors.begin(), vectors.end(), service,
                             [](const extract::FeatureVector& v, const ServiceId& s) { return v.service < s; });
  return it != vectors.end() && it->service == service ? &*it : nullptr;
}

CorpusDb make_db(std::vector<extract::FeatureVector> vectors, Metadata metadata) {
  std::sort(vectors.begin(), vectors.end(), [](const auto& a, const auto& b) { return a.service < b.service; });
  for (std::size_t i = 1; i < vectors.size(); ++i) {
    if (vectors[i - 1].service == vectors[i].service) {
      throw DataError("duplicate service " + vectors[i].service.str());
    }
  }
  return CorpusDb{std::move(vectors), {}, std::move(metadata)};
}

Metadata default_metadata(std::string source) {
  Metadata m;
  m.source = std::move(source);
  if (const char* epoch = std::getenv("SOURCE_DATE_EPOCH"); epoch && *epoch) m.created = epoch;
  return m;
}

namespace {

Json record_to_json(const VulnRecord& r) {
  return Json{{"vendor", r.vendor},     {"product", r.product}, {"component", r.component},
              {"introduced", r.introduced}, {"fixed", r.fixed},     {"class", to_string(r.vuln_class)},
              {"reference", r.reference}};
}

VulnRecord record_from_json(const Json& j) {
  if (!j.is_object()) throw SchemaError("vuln record must be an object");
  VulnRecord r{j.at("vendor").get<std::string>(),
               j.at("product").get<std::string>(),
               j.value("component", std::string{}),
               j.value("introduced", std::string{}),
               j.value("fixed", std::string{}),
               VulnClass::other,
               j.value("reference", std::string{})};
  auto c = parse_vuln_class(j.at("class").get<std::string>());
  if (!c) throw SchemaError("unknown vuln class '" + j.at("class").get<std::string>() + "'");
  r.vuln_class = *c;
  validate(r);
  return r;
}

}  // namespace

std::string serialize_db(const CorpusDb& db) {
  Json vectors = Json::array();
  for (const auto& v : db.vectors) vectors.push_back(vector_to_json(v));
  Json vulns = Json::array();
  for (const auto& r : db.vulns) vulns.push_back(record_to_json(r));
  Json meta{{"toolchain_version", db.metadata.toolchain_version}};
  if (!db.metadata.created.empty()) meta["created"] = db.metadata.created;
  if (!db.metadata.source.empty()) meta["source"] = db.metadata.source;
  return dump_json(Json{{"schema_version", kSchemaVersion},
                        {"metadata", std::move(meta)},
                        {"vectors", std::move(vectors)},
                        {"vulns", std::move(vulns)}});
}

CorpusDb parse_db(std::string_view text) {
  const auto j = parse_json(text, "corpus db");
  return with_schema_context("corpus db", [&] {
    if (!j.is_object() || !j.contains("schema_version")) throw SchemaError("corpus db: missing schema_version");
    if (j.at("schema_version") != kSchemaVersion) {
      throw SchemaError("corpus db: unsupported schema_version " + j.at("schema_version").dump());
    }
    CorpusDb db;
    const auto& meta = j.at("metadata");
    db.metadata.toolchain_version = meta.value("toolchain_version", std::string{});
    db.metadata.created = meta.value("created", std::string{});
    db.metadata.source = meta.value("source", std::string{});
    for (const auto& v : j.at("vectors")) db.vectors.push_back(vector_from_json(v));
    for (std::size_t i = 1; i < db.vectors.size(); ++i) {
      if (!(db.vectors[i - 1].service < db.vectors[i].service)) {
        throw SchemaError("corpus db: vectors not ordered by unique service");
      }
    }
    for (const auto& r : j.value("vulns", Json::array())) db.vulns.push_back(record_from_json(r));
    return db;
  });
}

void save_db(const CorpusDb& db, const std::filesystem::path& path) { write_file_atomic(path, serialize_db(db)); }

CorpusDb load_db(const std::filesystem::path& path) {
  try {
    return parse_db(read_file(path));
  } catch (const SchemaError& e) {
    throw SchemaError(path.string() + ": " + e.what());
  }
}

std::vector<VulnRecord> parse_vuln_records(std::string_view text) {
  const auto j = parse_json(text, "vuln records");
  return with_schema_context("vuln records", [&] {
    if (!j.is_array()) throw SchemaError("vuln records: expected a JSON list");
    std::vector<VulnRecord> out;
    for (const auto& r : j) out.push_back(record_from_json(r));
    return out;
  });
}

std::vector<VulnRecord> load_vuln_records(const std::filesystem::path& path) {
  return parse_vuln_records(read_file(path));
}

Annotated annotate_vulns(CorpusDb db, const std::vector<VulnRecord>& records) {
  Annotated out;
  for (const auto& r : records) {
    validate(r);
    if (std::find(db.vulns.begin(), db.vulns.end(), r) == db.vulns.end()) db.vulns.push_back(r);
    const bool known = std::any_of(db.vectors.begin(), db.vectors.end(),
                                   [&](const auto& v) { return r.same_target(v.service); });
    if (!known) {
      std::string target = r.vendor + ":" + r.product + (r.component.empty() ? "" : " component " + r.component);
      out.dangling.push_back("dangling vuln record " + (r.reference.empty() ? "" : r.reference + " ") +
                             "for " + target + ": no such product in the corpus");
    }
  }
  out.db = std::move(db);
  return out;
}

ClusterVulns vulns_for_cluster(const CorpusDb& db, std::span<const ServiceId> cluster) {
  ClusterVulns out;
  std::size_t hit = 0;
  for (const auto& s : cluster) {
    bool any = false;
    for (const auto& r : db.vulns) {
      if (r.matches(s)) {
        out.matches.emplace_back(s, r);
        any = true;
      }
    }
    hit += any;
  }
  out.actionable = !cluster.empty() && hit == cluster.size();
  out.partial = hit > 0 && hit < cluster.size();
  return out;
}

}  // namespace corsica::store
