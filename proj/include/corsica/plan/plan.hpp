#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "corsica/tree/tree.hpp"

namespace corsica::plan {

inline constexpr int kPlanSchemaVersion = 1;
inline constexpr int kReportSchemaVersion = 1;

struct Target {
  std::string host;
  std::uint16_t port = 80;
  std::string scheme = "http";

  /// "host:port"
  std::string key() const;
  auto operator<=>(const Target&) const = default;
};

/// Liveness probe: load `probe_path` as an image; alive iff onload or
/// onerror fires before the timeout.
struct Discovery {
  std::uint32_t timeout_ms = 3000;
  std::string probe_path = "/favicon.ico";

  bool operator==(const Discovery&) const = default;
};

struct Limits {
  std::size_t max_parallel_checks = 6;
  std::uint32_t per_check_timeout_ms = 3000;

  bool operator==(const Limits&) const = default;
};

struct ProbePlan {
  std::vector<Target> targets;
  Discovery discovery;
  tree::DecisionTree tree;
  Limits limits;

  bool operator==(const ProbePlan&) const = default;
};

/// Throws DataError on zero timeouts/parallelism or duplicate targets.
ProbePlan emit_plan(tree::DecisionTree tree, std::vector<Target> targets, Limits limits = {},
                    Discovery discovery = {});

std::string serialize_plan(const ProbePlan& plan);
ProbePlan parse_plan(std::string_view text);

/// One target per line as "[scheme://]host[:port]"; blank lines and '#'
/// comments are skipped. Port defaults to 80 (443 for https).
std::vector<Target> parse_targets(std::string_view text);

/// Self-contained HTML page: the plan as an inline JSON block, the report
/// URL and the runtime bundle inline. Throws DataError when the bundle is
/// empty or the URL is not http(s).
std::string emit_probe_page(const ProbePlan& plan, std::string_view report_url, std::string_view runtime_js);

/// The plan JSON exactly as embedded in a probe page.
std::string embedded_plan_json(const ProbePlan& plan);

struct Step {
  std::string path;
  tree::Outcome outcome = tree::Outcome::mismatch;
  bool loaded = false;  // the resource loaded at all

  bool operator==(const Step&) const = default;
};

struct TargetReport {
  Target target;
  bool alive = false;
  std::vector<Step> path_taken;
  std::vector<ServiceId> cluster;
  std::size_t requests_used = 0;
  std::vector<std::string> errors;
  /// What was observed contradicts the reached leaf: probably a service
  /// outside the corpus, reported against its nearest cluster.
  bool not_in_corpus = false;

  bool operator==(const TargetReport&) const = default;
};

struct ScanReport {
  bool discovery_counted = false;  // requests_used includes the discovery probe
  std::vector<TargetReport> targets;

  bool operator==(const ScanReport&) const = default;
};

enum class Identification { unique, multiple, none };

std::string_view to_string(Identification id);

/// none for dead targets, empty clusters, the not-in-corpus caveat, or a
/// walk where no probed resource loaded (nothing was actually observed).
Identification classify(const TargetReport& report);

struct Summary {
  std::size_t targets = 0;
  std::size_t alive = 0;
  std::size_t unique = 0;
  std::size_t multiple = 0;
  std::size_t none = 0;
  std::size_t requests = 0;
};

Summary summarize(const ScanReport& report);

std::string serialize_report(const ScanReport& report);
/// Validates schema and that requests_used = |path_taken| (+1 when
/// discovery is counted) for every target.
ScanReport parse_report(std::string_view text);

}  // namespace corsica::plan
