#include "corsica/tree/tree.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <set>

#include "corsica/error.hpp"

namespace corsica::tree {

using extract::Feature;

std::string_view to_string(Outcome o) { return o == Outcome::match ? "match" : "mismatch"; }

namespace {

bool all_satisfied(const std::vector<Subfeature>& observed, const std::vector<Subfeature>& expected) {
  return std::all_of(expected.begin(), expected.end(), [&](const Subfeature& want) {
    return std::any_of(observed.begin(), observed.end(),
                       [&](const Subfeature& have) { return extract::satisfies(have, want); });
  });
}

using Bits = std::vector<std::uint64_t>;

Bits make_bits(std::size_t n) { return Bits((n + 63) / 64, 0); }
void set_bit(Bits& b, std::size_t i) { b[i / 64] |= std::uint64_t{1} << (i % 64); }
bool test_bit(const Bits& b, std::size_t i) { return (b[i / 64] >> (i % 64)) & 1; }

std::size_t and_count(const Bits& a, const Bits& b) {
  std::size_t n = 0;
  for (std::size_t i = 0; i < a.size(); ++i) n += std::popcount(a[i] & b[i]);
  return n;
}

// Every distinct check the vectors can contribute, with the set of services
// each one matches.
struct CheckTable {
  std::vector<FeatureCheck> checks;
  std::vector<Bits> matches;                        // per check, over services
  std::vector<std::vector<std::size_t>> of_service;  // checks contributed per service

  CheckTable(std::span<const FeatureVector> vectors, std::size_t max_subfeatures) {
    const std::size_t n = vectors.size();
    std::map<FeatureCheck, std::size_t> ids;
    of_service.resize(n);
    // path -> (service, verified subfeatures) of every service having it
    std::map<std::string, std::vector<std::pair<std::size_t, std::vector<Subfeature>>>> by_path;
    for (std::size_t s = 0; s < n; ++s) {
      for (const auto& f : vectors[s].features) {
        auto verified = f.verified();
        if (verified.empty()) continue;
        auto check = check_for(f, max_subfeatures);
        auto [it, inserted] = ids.try_emplace(*check, checks.size());
        if (inserted) checks.push_back(std::move(*check));
        of_service[s].push_back(it->second);
        by_path[f.path].emplace_back(s, std::move(verified));
      }
    }
    matches.assign(checks.size(), make_bits(n));
    for (std::size_t c = 0; c < checks.size(); ++c) {
      for (const auto& [s, observed] : by_path[checks[c].path]) {
        if (all_satisfied(observed, checks[c].checks)) set_bit(matches[c], s);
      }
    }
  }
};

struct Candidate {
  std::size_t id = 0;
  std::size_t score = 0;
  double mass = 0;
};

class Builder {
 public:
  Builder(std::span<const FeatureVector> vectors, const TreeConfig& config)
      : vectors_(vectors), config_(config), table_(vectors, config.max_subfeatures) {
    for (const auto& v : vectors) {
      auto it = config.weights.find(v.service);
      weights_.push_back(it == config.weights.end() ? 1.0 : it->second);
    }
    for (const auto& v : vectors) {
      std::set<std::string> paths;
      // A file is served whether or not its subfeatures were verified.
      for (const auto& f : v.features) paths.insert(f.path);
      paths_.push_back(std::move(paths));
    }
  }

  DecisionTree run() {
    DecisionTree tree;
    tree.config = config_;
    std::vector<std::size_t> all(vectors_.size());
    std::iota(all.begin(), all.end(), 0);
    build(tree, all, 0);
    return tree;
  }

 private:
  std::size_t build(DecisionTree& tree, const std::vector<std::size_t>& members, std::size_t depth) {
    const std::size_t index = tree.nodes.size();
    tree.nodes.emplace_back();
    auto best = members.size() > 1 && depth < config_.max_depth ? choose(members) : std::nullopt;
    if (!best) {
      make_leaf(tree.nodes[index], members);
      return index;
    }
    std::vector<std::size_t> matched, mismatched;
    for (auto s : members) (test_bit(table_.matches[*best], s) ? matched : mismatched).push_back(s);
    const auto& check = table_.checks[*best];
    tree.nodes[index].check = check;
    tested_.push_back(check.path);
    const auto m = build(tree, matched, depth + 1);
    const auto mm = build(tree, mismatched, depth + 1);
    tested_.pop_back();
    tree.nodes[index].on_match = m;
    tree.nodes[index].on_mismatch = mm;
    return index;
  }

  std::optional<std::size_t> choose(const std::vector<std::size_t>& members) {
    Bits in = make_bits(vectors_.size());
    for (auto s : members) set_bit(in, s);
    std::vector<std::size_t> ids;
    for (auto s : members) ids.insert(ids.end(), table_.of_service[s].begin(), table_.of_service[s].end());
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());

    const bool weighted = !config_.weights.empty();
    std::optional<Candidate> best;
    for (auto id : ids) {
      const auto hits = and_count(table_.matches[id], in);
      if (hits == 0 || hits == members.size()) continue;
      Candidate c{id, hits * 2 > members.size() ? hits * 2 - members.size() : members.size() - hits * 2,
                  static_cast<double>(hits)};
      if (weighted) {
        c.mass = 0;
        for (auto s : members) {
          if (test_bit(table_.matches[id], s)) c.mass += weights_[s];
        }
      }
      if (!best || better(c, *best)) best = c;
    }
    if (!best) return std::nullopt;
    return best->id;
  }

  // Lower score, then heavier match side, then more subfeatures, then the
  // smaller path, then the smaller subfeature list.
  bool better(const Candidate& a, const Candidate& b) const {
    if (a.score != b.score) return a.score < b.score;
    if (a.mass != b.mass) return a.mass > b.mass;
    const auto& ca = table_.checks[a.id];
    const auto& cb = table_.checks[b.id];
    if (ca.checks.size() != cb.checks.size()) return ca.checks.size() > cb.checks.size();
    if (ca.path != cb.path) return ca.path < cb.path;
    return ca.checks < cb.checks;
  }

  void make_leaf(Node& node, const std::vector<std::size_t>& members) {
    for (auto s : members) node.cluster.push_back(vectors_[s].service);
    std::sort(node.cluster.begin(), node.cluster.end());
    std::set<std::string> seen;
    for (const auto& path : tested_) {
      if (!seen.insert(path).second) continue;
      const auto have = std::count_if(members.begin(), members.end(),
                                      [&](std::size_t s) { return paths_[s].count(path) > 0; });
      if (have == 0) node.expectations.push_back({path, false});
      if (static_cast<std::size_t>(have) == members.size()) node.expectations.push_back({path, true});
    }
  }

  std::span<const FeatureVector> vectors_;
  const TreeConfig& config_;
  CheckTable table_;
  std::vector<double> weights_;
  std::vector<std::set<std::string>> paths_;
  std::vector<std::string> tested_;
};

void check_unique_services(std::span<const FeatureVector> vectors) {
  std::set<ServiceId> seen;
  for (const auto& v : vectors) {
    if (!seen.insert(v.service).second) throw DataError("duplicate service " + v.service.str());
  }
}

}  // namespace

Outcome check_outcome(const FeatureVector& vector, const FeatureCheck& check) {
  const Feature* f = vector.find(check.path);
  if (!f || f->filetype != check.filetype) return Outcome::mismatch;
  return all_satisfied(f->verified(), check.checks) ? Outcome::match : Outcome::mismatch;
}

std::optional<FeatureCheck> check_for(const Feature& feature, std::size_t max_subfeatures) {
  auto verified = feature.verified();
  if (verified.empty()) return std::nullopt;
  if (verified.size() > max_subfeatures) verified.resize(max_subfeatures);
  return FeatureCheck{feature.path, feature.filetype, std::move(verified)};
}

std::vector<std::vector<ServiceId>> equivalence_classes(std::span<const FeatureVector> vectors,
                                                        std::size_t max_subfeatures) {
  check_unique_services(vectors);
  const CheckTable table(vectors, max_subfeatures);
  const std::size_t n = vectors.size();
  // Outcome signature of each service over every constructible check.
  std::vector<Bits> signature(n, make_bits(table.checks.size()));
  for (std::size_t c = 0; c < table.checks.size(); ++c) {
    for (std::size_t s = 0; s < n; ++s) {
      if (test_bit(table.matches[c], s)) set_bit(signature[s], c);
    }
  }
  std::vector<std::vector<ServiceId>> classes;
  std::vector<std::size_t> representative;
  for (std::size_t s = 0; s < n; ++s) {
    std::size_t k = 0;
    while (k < representative.size() && signature[representative[k]] != signature[s]) ++k;
    if (k == representative.size()) {
      representative.push_back(s);
      classes.emplace_back();
    }
    classes[k].push_back(vectors[s].service);
  }
  for (auto& c : classes) std::sort(c.begin(), c.end());
  std::sort(classes.begin(), classes.end());
  return classes;
}

DecisionTree build_tree(std::span<const FeatureVector> vectors, const TreeConfig& config) {
  if (vectors.empty()) throw DataError("empty corpus");
  if (config.max_subfeatures == 0) throw DataError("max_subfeatures must be positive");
  check_unique_services(vectors);
  return Builder(vectors, config).run();
}

std::size_t DecisionTree::walk(const std::function<Outcome(const FeatureCheck&)>& decide,
                               std::vector<Hop>* hops) const {
  std::size_t at = root;
  while (!nodes.at(at).is_leaf()) {
    const auto outcome = decide(*nodes[at].check);
    if (hops) hops->push_back({at, outcome});
    at = outcome == Outcome::match ? nodes[at].on_match : nodes[at].on_mismatch;
  }
  return at;
}

std::size_t DecisionTree::leaf_for(const FeatureVector& vector, std::vector<Hop>* hops) const {
  return walk([&](const FeatureCheck& c) { return check_outcome(vector, c); }, hops);
}

std::vector<std::size_t> DecisionTree::leaves() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (nodes[i].is_leaf()) out.push_back(i);
  }
  return out;
}

TreeMetrics tree_metrics(const DecisionTree& tree, std::span<const FeatureVector> vectors) {
  std::map<ServiceId, std::size_t> depth_of;
  std::vector<std::pair<std::size_t, std::size_t>> stack{{tree.root, 0}};
  TreeMetrics m;
  while (!stack.empty()) {
    auto [at, depth] = stack.back();
    stack.pop_back();
    const auto& node = tree.nodes.at(at);
    if (node.is_leaf()) {
      ++m.leaf_count;
      if (node.cluster.size() == 1) ++m.unique_leaves;
      for (const auto& s : node.cluster) depth_of[s] = depth;
      continue;
    }
    stack.push_back({node.on_mismatch, depth + 1});
    stack.push_back({node.on_match, depth + 1});
  }
  m.service_count = vectors.size();
  std::size_t total = 0;
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    auto it = depth_of.find(vectors[i].service);
    if (it == depth_of.end()) throw DataError("service " + vectors[i].service.str() + " is not in the tree");
    total += it->second;
    m.min_path = i == 0 ? it->second : std::min(m.min_path, it->second);
    m.max_path = std::max(m.max_path, it->second);
  }
  if (!vectors.empty()) m.avg_path = static_cast<double>(total) / vectors.size();
  const auto g = std::gcd(m.service_count, m.leaf_count);
  m.cluster_size_num = g ? m.service_count / g : 0;
  m.cluster_size_den = g ? m.leaf_count / g : 1;
  return m;
}

}  // namespace corsica::tree
