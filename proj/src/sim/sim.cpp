#include "corsica/sim/sim.hpp"

#include <algorithm>
#include <future>
#include <memory>

#include "../json_codec.hpp"
#include "corsica/corpus/manifest.hpp"
#include "corsica/extract/css.hpp"
#include "corsica/extract/image.hpp"
#include "corsica/extract/js.hpp"
#include "corsica/io.hpp"

namespace corsica::sim {

using extract::FileType;
using extract::Subfeature;

Evaluator::Evaluator(const corpus::ServiceFileSet& set, extract::ExtractOptions options)
    : set_(set), options_(options) {}

const extract::Feature* Evaluator::feature(const std::string& path, const corpus::FileEntry& entry) {
  auto [it, inserted] = cache_.try_emplace(path);
  if (inserted) {
    switch (entry.type) {
      case FileType::image: it->second = extract::extract_image_feature(path, entry.bytes); break;
      case FileType::css: it->second = extract::extract_css_features(path, entry.bytes, options_); break;
      case FileType::js: it->second = extract::extract_js_features(path, entry.bytes, options_); break;
      case FileType::other: break;
    }
  }
  return it->second ? &*it->second : nullptr;
}

Observation Evaluator::observe(const std::string& path, FileType type, const std::vector<Subfeature>& subs) {
  const auto* entry = set_.find(path);
  if (!entry || entry->type != type) return Observation::absent;
  const auto* f = feature(path, *entry);
  if (!f) return Observation::absent;
  const bool all = std::all_of(subs.begin(), subs.end(), [&](const Subfeature& want) {
    return std::any_of(f->subfeatures.begin(), f->subfeatures.end(),
                       [&](const Subfeature& have) { return extract::satisfies(have, want); });
  });
  return all ? Observation::match : Observation::differs;
}

tree::Outcome evaluate(const corpus::ServiceFileSet& set, const Subfeature& sub, const std::string& path) {
  Evaluator ev(set);
  return ev.observe(path, extract::filetype_of(sub), {sub}) == Observation::match ? tree::Outcome::match
                                                                                  : tree::Outcome::mismatch;
}

Identified identify(const corpus::ServiceFileSet& set, const tree::DecisionTree& tree, bool corp_blocking) {
  Evaluator ev(set);
  Identified out;
  out.leaf = tree.walk([&](const tree::FeatureCheck& check) {
    const auto obs = corp_blocking ? Observation::absent : ev.observe(check);
    out.path_taken.push_back({check.path, obs == Observation::match ? tree::Outcome::match : tree::Outcome::mismatch,
                              obs != Observation::absent});
    return out.path_taken.back().outcome;
  });
  const auto& leaf = tree.nodes[out.leaf];
  out.cluster = leaf.cluster;
  for (const auto& step : out.path_taken) {
    for (const auto& e : leaf.expectations) {
      if (e.path == step.path && e.present != step.loaded) out.not_in_corpus = true;
    }
  }
  return out;
}

plan::ScanReport run_plan(const Network& network, const plan::ProbePlan& plan, RunOptions options) {
  plan::ScanReport report;
  report.discovery_counted = false;
  report.targets.resize(plan.targets.size());
  auto run_one = [&](std::size_t i) {
    const auto& target = plan.targets[i];
    plan::TargetReport r;
    r.target = target;
    auto it = network.find(target.key());
    if (it == network.end()) {
      r.errors.push_back("discovery: no response from " + target.key() + " within " +
                         std::to_string(plan.discovery.timeout_ms) + " ms");
      return r;
    }
    r.alive = true;
    auto id = identify(it->second, plan.tree, options.corp_blocking);
    r.cluster = std::move(id.cluster);
    r.path_taken = std::move(id.path_taken);
    r.not_in_corpus = id.not_in_corpus;
    r.requests_used = r.path_taken.size();
    return r;
  };
  const std::size_t batch = std::max<std::size_t>(1, plan.limits.max_parallel_checks);
  for (std::size_t start = 0; start < plan.targets.size(); start += batch) {
    const std::size_t end = std::min(plan.targets.size(), start + batch);
    std::vector<std::future<plan::TargetReport>> running;
    for (std::size_t i = start; i < end; ++i) running.push_back(std::async(std::launch::async, run_one, i));
    for (std::size_t i = start; i < end; ++i) report.targets[i] = running[i - start].get();
  }
  return report;
}

extract::CompatOracle sim_oracle(std::vector<corpus::ServiceFileSet> sets) {
  struct State {
    std::map<ServiceId, corpus::ServiceFileSet> sets;
    std::map<ServiceId, std::unique_ptr<Evaluator>> evaluators;
  };
  auto state = std::make_shared<State>();
  for (auto& s : sets) {
    auto id = s.service;
    state->sets.emplace(std::move(id), std::move(s));
  }
  return [state](const ServiceId& service, const std::string& path, const Subfeature& sub) {
    auto& ev = state->evaluators[service];
    if (!ev) {
      auto it = state->sets.find(service);
      if (it == state->sets.end()) throw DataError("no files for " + service.str() + " to check against");
      ev = std::make_unique<Evaluator>(it->second);
    }
    return ev->observe(path, extract::filetype_of(sub), {sub}) == Observation::match;
  };
}

Network load_network(const std::filesystem::path& file) {
  const auto j = parse_json(read_file(file), file.string());
  if (!j.is_object()) throw SchemaError(file.string() + ": network must be a JSON object");
  Network net;
  for (const auto& [key, ref] : j.items()) {
    const auto colon = key.rfind(':');
    if (colon == std::string::npos || colon == 0 || colon + 1 == key.size()) {
      throw SchemaError(file.string() + ": key '" + key + "' is not host:port");
    }
    if (!ref.is_string()) throw SchemaError(file.string() + ": value for '" + key + "' must be a path");
    std::filesystem::path target = ref.get<std::string>();
    if (target.is_relative()) target = file.parent_path() / target;
    net.emplace(key, corpus::load_file_set(target));
  }
  return net;
}

}  // namespace corsica::sim
