#include "corsica/plan/plan.hpp"

#include <algorithm>
#include <charconv>
#include <set>

#include "../tree/tree_json.hpp"

namespace corsica::plan {

namespace {

Json target_to_json(const Target& t) { return Json{{"host", t.host}, {"port", t.port}, {"scheme", t.scheme}}; }

void validate(const Target& t) {
  if (t.host.empty() || t.host.find_first_of("/ \t:@") != std::string::npos) {
    throw DataError("bad target host '" + t.host + "'");
  }
  if (t.port == 0) throw DataError("bad target port for " + t.host);
  if (t.scheme != "http" && t.scheme != "https") throw DataError("unsupported scheme '" + t.scheme + "'");
}

Target target_from_json(const Json& j) {
  const auto port = j.at("port").get<int>();
  if (port <= 0 || port > 65535) throw SchemaError("target port out of range");
  Target t{j.at("host").get<std::string>(), static_cast<std::uint16_t>(port), j.value("scheme", std::string("http"))};
  validate(t);
  return t;
}

void validate(const ProbePlan& p) {
  if (p.discovery.timeout_ms == 0 || p.limits.per_check_timeout_ms == 0) throw DataError("timeouts must be positive");
  if (p.limits.max_parallel_checks == 0) throw DataError("max_parallel_checks must be positive");
  if (p.discovery.probe_path.empty() || p.discovery.probe_path[0] != '/') {
    throw DataError("probe_path must start with '/'");
  }
  std::set<Target> seen;
  for (const auto& t : p.targets) {
    validate(t);
    if (!seen.insert(t).second) throw DataError("duplicate target " + t.key());
  }
}

Json plan_to_json(const ProbePlan& p) {
  Json targets = Json::array();
  for (const auto& t : p.targets) targets.push_back(target_to_json(t));
  return Json{{"schema_version", kPlanSchemaVersion},
              {"targets", std::move(targets)},
              {"discovery", {{"timeout_ms", p.discovery.timeout_ms}, {"probe_path", p.discovery.probe_path}}},
              {"limits",
               {{"max_parallel_checks", p.limits.max_parallel_checks},
                {"per_check_timeout_ms", p.limits.per_check_timeout_ms}}},
              {"tree", tree::tree_to_json(p.tree)}};
}

void replace_all(std::string& s, std::string_view from, std::string_view to) {
  for (auto pos = s.find(from); pos != std::string::npos; pos = s.find(from, pos + to.size())) {
    s.replace(pos, from.size(), to);
  }
}

}  // namespace

std::string Target::key() const { return host + ":" + std::to_string(port); }

ProbePlan emit_plan(tree::DecisionTree tree, std::vector<Target> targets, Limits limits, Discovery discovery) {
  ProbePlan p{std::move(targets), std::move(discovery), std::move(tree), limits};
  validate(p);
  return p;
}

std::string serialize_plan(const ProbePlan& plan) { return dump_json(plan_to_json(plan)); }

ProbePlan parse_plan(std::string_view text) {
  const auto j = parse_json(text, "plan");
  return with_schema_context("plan", [&] {
    if (!j.is_object() || j.value("schema_version", 0) != kPlanSchemaVersion) {
      throw SchemaError("plan: missing or unsupported schema_version");
    }
    ProbePlan p;
    for (const auto& t : j.at("targets")) p.targets.push_back(target_from_json(t));
    const auto& d = j.at("discovery");
    p.discovery.timeout_ms = d.at("timeout_ms").get<std::uint32_t>();
    p.discovery.probe_path = d.at("probe_path").get<std::string>();
    const auto& l = j.at("limits");
    p.limits.max_parallel_checks = l.at("max_parallel_checks").get<std::size_t>();
    p.limits.per_check_timeout_ms = l.at("per_check_timeout_ms").get<std::uint32_t>();
    p.tree = tree::tree_from_json(j.at("tree"));
    try {
      validate(p);
    } catch (const SchemaError&) {
      throw;
    } catch (const DataError& e) {
      throw SchemaError(std::string("plan: ") + e.what());
    }
    return p;
  });
}

std::vector<Target> parse_targets(std::string_view text) {
  std::vector<Target> out;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    auto line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    while (!line.empty() && std::isspace(static_cast<unsigned char>(line.back()))) line.remove_suffix(1);
    while (!line.empty() && std::isspace(static_cast<unsigned char>(line.front()))) line.remove_prefix(1);
    if (line.empty()) continue;
    const auto where = "targets line " + std::to_string(line_no);
    Target t;
    if (auto sep = line.find("://"); sep != std::string_view::npos) {
      t.scheme = std::string(line.substr(0, sep));
      line = line.substr(sep + 3);
      if (t.scheme == "https") t.port = 443;
    }
    if (!line.empty() && line.back() == '/') line.remove_suffix(1);
    if (auto colon = line.rfind(':'); colon != std::string_view::npos) {
      int port = 0;
      auto digits = line.substr(colon + 1);
      auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), port);
      if (ec != std::errc{} || ptr != digits.data() + digits.size() || port <= 0 || port > 65535) {
        throw DataError(where + ": bad port '" + std::string(digits) + "'");
      }
      t.port = static_cast<std::uint16_t>(port);
      line = line.substr(0, colon);
    }
    t.host = std::string(line);
    try {
      validate(t);
    } catch (const DataError& e) {
      throw DataError(where + ": " + e.what());
    }
    out.push_back(std::move(t));
  }
  return out;
}

std::string embedded_plan_json(const ProbePlan& plan) {
  auto text = serialize_plan(plan);
  // Keep the JSON from closing the <script> element or opening a comment.
  replace_all(text, "</", "<\\/");
  replace_all(text, "<!--", "\\u003c!--");
  return text;
}

std::string emit_probe_page(const ProbePlan& plan, std::string_view report_url, std::string_view runtime_js) {
  if (runtime_js.find_first_not_of(" \t\r\n") == std::string_view::npos) {
    throw DataError("missing probe runtime bundle");
  }
  if (!(report_url.starts_with("http://") || report_url.starts_with("https://"))) {
    throw DataError("report URL must be http(s): '" + std::string(report_url) + "'");
  }
  std::string runtime(runtime_js);
  replace_all(runtime, "</script", "<\\/script");
  auto url = Json(std::string(report_url)).dump();
  replace_all(url, "</", "<\\/");
  std::string page;
  page += "<!DOCTYPE html>\n<html>\n<head>\n<meta charset=\"utf-8\">\n<title>probe</title>\n</head>\n<body>\n";
  page += "<script id=\"corsica-plan\" type=\"application/json\">\n" + embedded_plan_json(plan) + "</script>\n";
  page += "<script>window.CORSICA_REPORT_URL = " + url + ";</script>\n";
  page += "<script>\n" + runtime + (runtime.ends_with('\n') ? "" : "\n") + "</script>\n";
  page += "</body>\n</html>\n";
  return page;
}

std::string_view to_string(Identification id) {
  switch (id) {
    case Identification::unique: return "unique";
    case Identification::multiple: return "multiple";
    case Identification::none: return "none";
  }
  return "none";
}

Identification classify(const TargetReport& r) {
  if (!r.alive || r.cluster.empty() || r.not_in_corpus) return Identification::none;
  // With a root leaf nothing needs observing; otherwise something must load.
  if (!r.path_taken.empty() &&
      std::none_of(r.path_taken.begin(), r.path_taken.end(), [](const Step& s) { return s.loaded; })) {
    return Identification::none;
  }
  return r.cluster.size() == 1 ? Identification::unique : Identification::multiple;
}

Summary summarize(const ScanReport& report) {
  Summary s;
  for (const auto& t : report.targets) {
    ++s.targets;
    s.alive += t.alive;
    s.requests += t.requests_used;
    switch (classify(t)) {
      case Identification::unique: ++s.unique; break;
      case Identification::multiple: ++s.multiple; break;
      case Identification::none: ++s.none; break;
    }
  }
  return s;
}

std::string serialize_report(const ScanReport& report) {
  Json targets = Json::array();
  for (const auto& t : report.targets) {
    Json steps = Json::array();
    for (const auto& s : t.path_taken) {
      steps.push_back(Json{{"path", s.path}, {"outcome", tree::to_string(s.outcome)}, {"loaded", s.loaded}});
    }
    Json cluster = Json::array();
    for (const auto& c : t.cluster) cluster.push_back(service_to_json(c));
    Json j = target_to_json(t.target);
    j["alive"] = t.alive;
    j["path_taken"] = std::move(steps);
    j["cluster"] = std::move(cluster);
    j["requests_used"] = t.requests_used;
    j["errors"] = t.errors;
    j["not_in_corpus"] = t.not_in_corpus;
    targets.push_back(std::move(j));
  }
  return dump_json(Json{{"schema_version", kReportSchemaVersion},
                        {"discovery_counted", report.discovery_counted},
                        {"targets", std::move(targets)}});
}

ScanReport parse_report(std::string_view text) {
  const auto j = parse_json(text, "report");
  return with_schema_context("report", [&] {
    if (!j.is_object() || j.value("schema_version", 0) != kReportSchemaVersion) {
      throw SchemaError("report: missing or unsupported schema_version");
    }
    ScanReport r;
    r.discovery_counted = j.value("discovery_counted", false);
    for (const auto& tj : j.at("targets")) {
      TargetReport t;
      t.target = target_from_json(tj);
      t.alive = tj.at("alive").get<bool>();
      for (const auto& sj : tj.at("path_taken")) {
        const auto outcome = sj.at("outcome").get<std::string>();
        if (outcome != "match" && outcome != "mismatch") throw SchemaError("report: bad outcome '" + outcome + "'");
        t.path_taken.push_back({sj.at("path").get<std::string>(),
                                outcome == "match" ? tree::Outcome::match : tree::Outcome::mismatch,
                                sj.value("loaded", false)});
      }
      for (const auto& c : tj.at("cluster")) t.cluster.push_back(service_from_json(c));
      t.requests_used = tj.at("requests_used").get<std::size_t>();
      t.errors = tj.value("errors", std::vector<std::string>{});
      t.not_in_corpus = tj.value("not_in_corpus", false);
      const auto expected = t.path_taken.size() + (r.discovery_counted ? 1 : 0);
      if (t.requests_used != expected) {
        throw SchemaError("report: " + t.target.key() + " requests_used " + std::to_string(t.requests_used) +
                          " != " + std::to_string(expected));
      }
      if (!t.alive && !t.path_taken.empty()) throw SchemaError("report: dead target " + t.target.key() + " has hops");
      r.targets.push_back(std::move(t));
    }
    return r;
  });
}

}  // namespace corsica::plan
