#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "corsica/extract/feature.hpp"

namespace corsica::tree {

using extract::FeatureVector;
using extract::Subfeature;

/// One probe request: load the file at `path` and test every subfeature.
struct FeatureCheck {
  std::string path;
  extract::FileType filetype = extract::FileType::other;
  std::vector<Subfeature> checks;

  auto operator<=>(const FeatureCheck&) const = default;
};

enum class Outcome { match, mismatch };

std::string_view to_string(Outcome o);

/// Match iff the vector has a feature at the check's path and every checked
/// subfeature is satisfied by one of its verified subfeatures.
Outcome check_outcome(const FeatureVector& vector, const FeatureCheck& check);

/// The check a feature contributes: its first `max_subfeatures` verified
/// subfeatures. Nothing when none is verified.
std::optional<FeatureCheck> check_for(const extract::Feature& feature, std::size_t max_subfeatures);

struct TreeConfig {
  std::size_t max_subfeatures = 5;
  std::size_t max_depth = 32;
  /// Frequency weights for tie-breaking; services not listed weigh 1.
  std::map<ServiceId, double> weights;

  bool operator==(const TreeConfig&) const = default;
};

/// Partition of the services into groups no constructible check tells
/// apart. Clusters are sorted, and ordered by their first member.
std::vector<std::vector<ServiceId>> equivalence_classes(std::span<const FeatureVector> vectors,
                                                        std::size_t max_subfeatures = 5);

/// What a leaf's members have in common at a path tested on the way down:
/// all of them have a feature there (present) or none does (absent).
struct PresenceExpectation {
  std::string path;
  bool present = false;

  auto operator<=>(const PresenceExpectation&) const = default;
};

struct Node {
  std::optional<FeatureCheck> check;  // set on internal nodes
  std::size_t on_match = 0;
  std::size_t on_mismatch = 0;
  std::vector<ServiceId> cluster;  // leaves; sorted
  std::vector<PresenceExpectation> expectations;

  bool is_leaf() const { return !check.has_value(); }
  bool operator==(const Node&) const = default;
};

struct Hop {
  std::size_t node = 0;
  Outcome outcome = Outcome::mismatch;
};

/// Nodes are stored in pre-order: a node, its match subtree, then its
/// mismatch subtree.
struct DecisionTree {
  TreeConfig config;
  std::vector<Node> nodes;
  std::size_t root = 0;

  /// Follows `decide` from the root; returns the leaf index.
  std::size_t walk(const std::function<Outcome(const FeatureCheck&)>& decide,
                   std::vector<Hop>* hops = nullptr) const;
  std::size_t leaf_for(const FeatureVector& vector, std::vector<Hop>* hops = nullptr) const;
  std::vector<std::size_t> leaves() const;

  bool operator==(const DecisionTree&) const = default;
};

/// Greedy balanced-split construction. Throws DataError("empty corpus")
/// for no vectors and DataError on duplicate services.
DecisionTree build_tree(std::span<const FeatureVector> vectors, const TreeConfig& config = {});

struct TreeMetrics {
  std::size_t service_count = 0;
  std::size_t leaf_count = 0;
  std::size_t unique_leaves = 0;
  std::uint64_t cluster_size_num = 0;  // avg_cluster_size = num / den, reduced
  std::uint64_t cluster_size_den = 1;
  std::size_t min_path = 0;
  double avg_path = 0;
  std::size_t max_path = 0;

  double avg_cluster_size() const { return static_cast<double>(cluster_size_num) / cluster_size_den; }
};

/// Path length of a service is the number of checks between the root and
/// the leaf holding it. Every vector's service must appear in a leaf.
TreeMetrics tree_metrics(const DecisionTree& tree, std::span<const FeatureVector> vectors);

inline constexpr int kTreeSchemaVersion = 1;

std::string serialize_tree(const DecisionTree& tree);
/// Validates structure: non-empty checks of the node's filetype, non-empty
/// clusters, each service in one leaf, no check repeated on a path.
DecisionTree parse_tree(std::string_view text);

}  // namespace corsica::tree
