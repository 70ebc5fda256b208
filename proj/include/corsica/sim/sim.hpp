#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "corsica/corpus/file_set.hpp"
#include "corsica/extract/feature.hpp"
#include "corsica/extract/vector.hpp"
#include "corsica/plan/plan.hpp"
#include "corsica/tree/tree.hpp"

namespace corsica::sim {

/// What a browser learns from one check: the resource did not load (or
/// has nothing observable), loaded but disagrees, or loaded and agrees.
enum class Observation { absent, differs, match };

/// Evaluates checks against one service's files the way an idealized
/// browser would, with extractor semantics. Parsed files are cached.
class Evaluator {
 public:
  explicit Evaluator(const corpus::ServiceFileSet& set, extract::ExtractOptions options = {});

  Observation observe(const std::string& path, extract::FileType type,
                      const std::vector<extract::Subfeature>& subs);
  Observation observe(const tree::FeatureCheck& check) { return observe(check.path, check.filetype, check.checks); }

 private:
  const extract::Feature* feature(const std::string& path, const corpus::FileEntry& entry);

  const corpus::ServiceFileSet& set_;
  extract::ExtractOptions options_;
  std::map<std::string, std::optional<extract::Feature>> cache_;
};

tree::Outcome evaluate(const corpus::ServiceFileSet& set, const extract::Subfeature& sub, const std::string& path);

struct Identified {
  std::vector<ServiceId> cluster;
  std::vector<plan::Step> path_taken;
  bool not_in_corpus = false;
  std::size_t leaf = 0;
};

/// Walks `tree` against `set`. With `corp_blocking` every resource fails to
/// load. The caveat is raised when an observation contradicts what all
/// members of the reached leaf have in common (a file they all serve did
/// not load, or one none of them serves did).
Identified identify(const corpus::ServiceFileSet& set, const tree::DecisionTree& tree, bool corp_blocking = false);

/// "host:port" -> files served there.
using Network = std::map<std::string, corpus::ServiceFileSet>;

struct RunOptions {
  bool corp_blocking = false;
};

/// Executes the plan: absent targets are dead, present ones are identified.
/// Targets run in batches of max_parallel_checks; report order follows the
/// plan. requests_used counts identification requests only.
plan::ScanReport run_plan(const Network& network, const plan::ProbePlan& plan, RunOptions options = {});

/// Compatibility oracle backed by the simulator: a subfeature is verified
/// iff evaluate() matches it on the service's own files.
extract::CompatOracle sim_oracle(std::vector<corpus::ServiceFileSet> sets);

/// JSON object mapping "host:port" to a file-set directory or manifest,
/// relative to the network file.
Network load_network(const std::filesystem::path& file);

}  // namespace corsica::sim
