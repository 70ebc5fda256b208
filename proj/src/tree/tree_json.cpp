#include "tree_json.hpp"

#include <set>

namespace corsica::tree {

namespace {

Json check_to_json(const FeatureCheck& c) {
  Json checks = Json::array();
  for (const auto& s : c.checks) checks.push_back(subfeature_to_json(s));
  return Json{{"path", c.path}, {"type", corpus::to_string(c.filetype)}, {"checks", std::move(checks)}};
}

FeatureCheck check_from_json(const Json& j) {
  FeatureCheck c;
  c.path = j.at("path").get<std::string>();
  if (!corpus::is_valid_web_path(c.path)) throw SchemaError("bad check path '" + c.path + "'");
  auto type = corpus::parse_file_type(j.at("type").get<std::string>());
  if (!type || *type == extract::FileType::other) throw SchemaError("bad check type at '" + c.path + "'");
  c.filetype = *type;
  for (const auto& s : j.at("checks")) {
    c.checks.push_back(subfeature_from_json(s));
    if (extract::filetype_of(c.checks.back()) != c.filetype) {
      throw SchemaError("check subfeature does not match type at '" + c.path + "'");
    }
  }
  if (c.checks.empty()) throw SchemaError("check at '" + c.path + "' has no subfeatures");
  return c;
}

Json node_to_json(const DecisionTree& tree, std::size_t at) {
  const auto& node = tree.nodes.at(at);
  if (!node.is_leaf()) {
    return Json{{"check", check_to_json(*node.check)},
                {"match", node_to_json(tree, node.on_match)},
                {"mismatch", node_to_json(tree, node.on_mismatch)}};
  }
  Json cluster = Json::array();
  for (const auto& s : node.cluster) cluster.push_back(service_to_json(s));
  Json expect = Json::array();
  for (const auto& e : node.expectations) expect.push_back(Json{{"path", e.path}, {"present", e.present}});
  return Json{{"cluster", std::move(cluster)}, {"expect", std::move(expect)}};
}

class Reader {
 public:
  explicit Reader(DecisionTree& tree) : tree_(tree) {}

  std::size_t read(const Json& j, std::size_t depth) {
    if (!j.is_object()) throw SchemaError("tree node must be an object");
    if (depth > 4096) throw SchemaError("tree too deep");
    const std::size_t index = tree_.nodes.size();
    tree_.nodes.emplace_back();
    if (j.contains("check")) {
      auto check = check_from_json(j.at("check"));
      if (std::find(on_path_.begin(), on_path_.end(), check) != on_path_.end()) {
        throw SchemaError("check on '" + check.path + "' repeated along a path");
      }
      on_path_.push_back(check);
      tree_.nodes[index].check = check;
      const auto m = read(j.at("match"), depth + 1);
      const auto mm = read(j.at("mismatch"), depth + 1);
      on_path_.pop_back();
      tree_.nodes[index].on_match = m;
      tree_.nodes[index].on_mismatch = mm;
      return index;
    }
    Node& leaf = tree_.nodes[index];
    for (const auto& s : j.at("cluster")) {
      auto id = service_from_json(s);
      if (!seen_.insert(id).second) throw SchemaError("service " + id.str() + " appears in two leaves");
      leaf.cluster.push_back(std::move(id));
    }
    if (leaf.cluster.empty()) throw SchemaError("empty leaf cluster");
    if (!std::is_sorted(leaf.cluster.begin(), leaf.cluster.end())) throw SchemaError("leaf cluster not sorted");
    for (const auto& e : j.value("expect", Json::array())) {
      leaf.expectations.push_back({e.at("path").get<std::string>(), e.at("present").get<bool>()});
    }
    return index;
  }

 private:
  DecisionTree& tree_;
  std::vector<FeatureCheck> on_path_;
  std::set<ServiceId> seen_;
};

}  // namespace

Json tree_to_json(const DecisionTree& tree) {
  Json config{{"max_subfeatures", tree.config.max_subfeatures}, {"max_depth", tree.config.max_depth}};
  if (!tree.config.weights.empty()) {
    Json weights = Json::array();
    for (const auto& [s, w] : tree.config.weights) weights.push_back(Json{{"service", service_to_json(s)}, {"weight", w}});
    config["weights"] = std::move(weights);
  }
  return Json{{"schema_version", kTreeSchemaVersion}, {"config", std::move(config)}, {"root", node_to_json(tree, tree.root)}};
}

DecisionTree tree_from_json(const Json& j) {
  return with_schema_context("tree", [&] {
    if (!j.is_object() || j.value("schema_version", 0) != kTreeSchemaVersion) {
      throw SchemaError("tree: missing or unsupported schema_version");
    }
    DecisionTree tree;
    const auto& config = j.at("config");
    tree.config.max_subfeatures = config.at("max_subfeatures").get<std::size_t>();
    tree.config.max_depth = config.at("max_depth").get<std::size_t>();
    for (const auto& w : config.value("weights", Json::array())) {
      tree.config.weights[service_from_json(w.at("service"))] = w.at("weight").get<double>();
    }
    Reader(tree).read(j.at("root"), 0);
    return tree;
  });
}

std::string serialize_tree(const DecisionTree& tree) { return dump_json(tree_to_json(tree)); }

DecisionTree parse_tree(std::string_view text) { return tree_from_json(parse_json(text, "tree")); }

}  // namespace corsica::tree
