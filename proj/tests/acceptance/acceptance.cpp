// Acceptance checks: one PASS/FAIL line per criterion, non-zero exit on any
// failure. Seeds and tolerances are fixed here.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "corsica/corpus/ingest.hpp"
#include "corsica/extract/css.hpp"
#include "corsica/extract/image.hpp"
#include "corsica/extract/js.hpp"
#include "corsica/extract/vector.hpp"
#include "corsica/sim/sim.hpp"
#include "corsica/store/db.hpp"
#include "corsica/tree/tree.hpp"
#include "generators.hpp"

using namespace corsica;
using namespace corsica::extract;
using testkit::fixture_dir;
using testkit::Rng;

namespace {

constexpr std::size_t kEquivalenceCorpora = 50;
constexpr double kEquivalenceBudgetSeconds = 30.0;
constexpr std::size_t kCmsServices = 950;
constexpr double kMaxAveragePath = 14.0;
constexpr std::size_t kMinPath = 1;
constexpr double kHandPartitionClusterSize = 1.5;
constexpr std::size_t kRoundTrips = 1000;
constexpr std::size_t kVersionPairs = 10000;

struct Verdict {
  bool pass = false;
  std::string detail;
};

corpus::ServiceFileSet install(const std::string& dir, const std::string& id) {
  return corpus::ingest_install_tree(fixture_dir() / dir, ServiceId::parse(id));
}

std::vector<corpus::ServiceFileSet> cms_sets() {
  return {install("cms/wordpress-4.6.1", "wordpress:wordpress:4.6.1"),
          install("cms/wordpress-4.7.0", "wordpress:wordpress:4.7.0"),
          install("cms/wordpress-4.7.5", "wordpress:wordpress:4.7.5"),
          install("cms/typo3-4.7.5", "typo3:typo3:4.7.5"),
          install("cms/typo3-4.7.6", "typo3:typo3:4.7.6"),
          install("cms/typo3-6.2.0", "typo3:typo3:6.2.0")};
}

std::vector<corpus::ServiceFileSet> three_sets() {
  return {install("three/router-1.0.2", "netco:router:1.0.2"),
          corpus::ingest_firmware_root(fixture_dir() / "three/router-1.1.0-rootfs", std::nullopt,
                                       ServiceId::parse("netco:router:1.1.0")),
          install("three/camera-2.3-site", "vista:camera:2.3")};
}

std::vector<FeatureVector> vectors_of(const std::vector<corpus::ServiceFileSet>& sets) {
  std::vector<FeatureVector> out;
  for (const auto& s : sets) out.push_back(build_feature_vector(s));
  return out;
}

std::vector<std::vector<ServiceId>> leaf_partition(const tree::DecisionTree& t) {
  std::vector<std::vector<ServiceId>> out;
  for (auto i : t.leaves()) out.push_back(t.nodes[i].cluster);
  std::sort(out.begin(), out.end());
  return out;
}

// The generated file corpora shared by the equivalence and soundness checks.
std::vector<std::vector<corpus::ServiceFileSet>> file_corpora() {
  std::vector<std::vector<corpus::ServiceFileSet>> out;
  Rng rng(20240501);
  for (std::size_t i = 0; i < kEquivalenceCorpora; ++i) {
    testkit::CorpusSpec spec;
    spec.services = testkit::uniform(rng, 20, 100);
    spec.paths = testkit::uniform(rng, 10, 50);
    spec.variants = testkit::uniform(rng, 1, 4);
    spec.presence = 0.3 + 0.6 * std::uniform_real_distribution<double>()(rng);
    spec.clone = 0.2;
    out.push_back(testkit::random_file_corpus(rng, spec));
  }
  return out;
}

Verdict oracle_equivalence(const std::vector<std::vector<corpus::ServiceFileSet>>& corpora) {
  const auto start = std::chrono::steady_clock::now();
  std::size_t agree = 0, services = 0;
  std::string first_failure;
  for (std::size_t i = 0; i < corpora.size(); ++i) {
    const auto vectors = vectors_of(corpora[i]);
    services += vectors.size();
    const auto t = tree::build_tree(vectors);
    auto classes = tree::equivalence_classes(vectors);
    std::sort(classes.begin(), classes.end());
    const auto leaves = leaf_partition(t);
    if (leaves == classes && leaves == testkit::group_by_canonical_form(vectors)) {
      ++agree;
    } else if (first_failure.empty()) {
      first_failure = " first mismatch in corpus " + std::to_string(i);
    }
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::ostringstream d;
  d << agree << "/" << corpora.size() << " corpora (" << services << " services) partition = equivalence classes, "
    << std::fixed;
  d.precision(2);
  d << seconds << " s (limit " << kEquivalenceBudgetSeconds << " s)" << first_failure;
  return {agree == corpora.size() && corpora.size() >= 50 && seconds < kEquivalenceBudgetSeconds, d.str()};
}

Verdict soundness(const std::vector<std::vector<corpus::ServiceFileSet>>& corpora) {
  std::size_t ok = 0, total = 0;
  auto check = [&](const std::vector<corpus::ServiceFileSet>& sets) {
    const auto t = tree::build_tree(vectors_of(sets));
    for (const auto& s : sets) {
      ++total;
      const auto id = sim::identify(s, t);
      if (std::binary_search(id.cluster.begin(), id.cluster.end(), s.service)) ++ok;
    }
  };
  for (const auto& c : corpora) check(c);
  check(cms_sets());
  check(three_sets());
  return {ok == total, std::to_string(ok) + "/" + std::to_string(total) + " services identified into their own cluster"};
}

Verdict three_hop_path() {
  const auto sets = cms_sets();
  const auto t = tree::build_tree(vectors_of(sets));
  const auto id = sim::identify(sets[4], t);
  const std::vector<plan::Step> expected{{"wp-includes/js/crop/cropper.js", tree::Outcome::mismatch, false},
                                         {"typo3/sysext/t3skin/images/btn-sprite.gif", tree::Outcome::match, true},
                                         {"typo3/js/extjs/ux/SearchField.js", tree::Outcome::match, true}};
  std::string walked;
  for (const auto& s : id.path_taken) {
    walked += (walked.empty() ? "" : " -> ") + s.path.substr(s.path.rfind('/') + 1) + " (" +
              std::string(tree::to_string(s.outcome)) + ")";
  }
  const bool leaf_ok = id.cluster == std::vector<ServiceId>{ServiceId::parse("typo3:typo3:4.7.6")};
  std::string leaf;
  for (const auto& c : id.cluster) leaf += (leaf.empty() ? "" : ",") + c.str();
  return {id.path_taken == expected && leaf_ok && !id.not_in_corpus, walked + " -> [" + leaf + "]"};
}

Verdict request_efficiency() {
  Rng rng(950);
  const auto vectors = testkit::cms_like_corpus(rng, kCmsServices);
  const auto t = tree::build_tree(vectors);
  const auto m = tree::tree_metrics(t, vectors);

  // Hand partition {2,2,1,1} on six services.
  auto img = [](const char* p) { return make_feature(p, FileType::image, {ImageDimension{1, 1}}); };
  std::vector<FeatureVector> six{{ServiceId::parse("h:p:1"), {img("a.png")}},
                                 {ServiceId::parse("h:p:2"), {img("a.png")}},
                                 {ServiceId::parse("h:p:3"), {img("b.png")}},
                                 {ServiceId::parse("h:p:4"), {img("b.png")}},
                                 {ServiceId::parse("h:p:5"), {img("a.png"), img("b.png")}},
                                 {ServiceId::parse("h:p:6"), {}}};
  const auto hand = tree::tree_metrics(tree::build_tree(six), six);

  std::ostringstream d;
  d.setf(std::ios::fixed);
  d.precision(2);
  d << m.service_count << " services, " << m.leaf_count << " leaves (" << m.unique_leaves
    << " unique), requests min/avg/max " << m.min_path << "/" << m.avg_path << "/" << m.max_path << " (avg limit "
    << kMaxAveragePath << "), avg cluster size " << m.cluster_size_num << "/" << m.cluster_size_den << " = "
    << m.avg_cluster_size() << "; hand partition " << hand.cluster_size_num << "/" << hand.cluster_size_den;
  const bool pass = m.service_count == kCmsServices && m.avg_path <= kMaxAveragePath && m.min_path >= kMinPath &&
                    hand.avg_cluster_size() == kHandPartitionClusterSize;
  return {pass, d.str()};
}

Verdict round_trips() {
  Rng rng(1000);
  std::size_t ok = 0;
  std::size_t by_type[3] = {0, 0, 0};
  std::string first_failure;
  for (std::size_t i = 0; i < kRoundTrips; ++i) {
    const auto kind = i % 3;
    ++by_type[kind];
    std::vector<Subfeature> expected;
    std::optional<Feature> got;
    if (kind == 0) {
      auto c = testkit::random_image(rng, 512);
      expected.push_back(c.size);
      got = extract_image_feature("img/x.bin", c.bytes);
    } else if (kind == 1) {
      auto c = testkit::random_css(rng, testkit::uniform(rng, 1, 5));
      expected.assign(c.expected.begin(), c.expected.end());
      got = extract_css_features("s.css", c.source);
    } else {
      auto c = testkit::random_js(rng, testkit::uniform(rng, 1, 5));
      expected.assign(c.expected.begin(), c.expected.end());
      if (expected.size() > 5) expected.resize(5);
      got = extract_js_features("a.js", c.source);
    }
    if (got && got->subfeatures == expected) {
      ++ok;
    } else if (first_failure.empty()) {
      first_failure = "; first failure at cycle " + std::to_string(i);
    }
  }
  return {ok == kRoundTrips, std::to_string(ok) + "/" + std::to_string(kRoundTrips) + " cycles exact (images " +
                                 std::to_string(by_type[0]) + ", css " + std::to_string(by_type[1]) + ", js " +
                                 std::to_string(by_type[2]) + ")" + first_failure};
}

Verdict closure() {
  auto sets = cms_sets();
  for (auto& s : three_sets()) sets.push_back(std::move(s));
  sets.push_back(install("images", "fixture:images:1"));
  std::size_t ok = 0, total = 0;
  for (const auto& set : sets) {
    for (const auto& f : build_feature_vector(set).features) {
      for (const auto& sub : f.subfeatures) {
        ++total;
        ok += sim::evaluate(set, sub, f.path) == tree::Outcome::match;
      }
    }
  }
  return {ok == total && total > 0,
          std::to_string(ok) + "/" + std::to_string(total) + " extracted subfeatures match their source"};
}

Verdict corp_blocking() {
  std::ostringstream d;
  bool pass = true;
  auto run = [&](const std::string& name, const std::vector<corpus::ServiceFileSet>& sets) {
    sim::Network net;
    std::string targets;
    for (std::size_t i = 0; i < sets.size(); ++i) {
      const auto host = "10.1.0." + std::to_string(i + 1);
      net[host + ":80"] = sets[i];
      targets += host + "\n";
    }
    const auto p = plan::emit_plan(tree::build_tree(vectors_of(sets)), plan::parse_targets(targets));
    const auto open = plan::summarize(sim::run_plan(net, p));
    const auto blocked = plan::summarize(sim::run_plan(net, p, {true}));
    pass = pass && blocked.unique == 0 && open.unique > 0;
    d << (d.tellp() > 0 ? "; " : "") << name << " unique " << open.unique << " -> " << blocked.unique;
  };
  run("three-service", three_sets());
  run("cms family", cms_sets());
  return {pass, d.str()};
}

Verdict vulnerability_join() {
  const std::vector<std::string> versions{"3.9.9", "4.0", "4.0.1", "4.1.4", "4.1.5", "4.2.0"};
  std::vector<FeatureVector> vectors;
  for (const auto& v : versions) {
    vectors.push_back({ServiceId{"wordpress", "wordpress", v, "slider"},
                       {make_feature("wp-content/plugins/slider/js/slider.js", FileType::js,
                                     {JsSymbol{"SLIDER_VERSION", SymbolKind::variable, "'" + v + "'", std::nullopt}})}});
  }
  const store::VulnRecord record{"wordpress", "wordpress", "slider", "4.0", "4.1.5", store::VulnClass::rce, "fixture"};
  const auto db = store::annotate_vulns(store::make_db(vectors), {record}).db;
  std::string flagged;
  bool fixture_ok = true;
  for (const auto& v : versions) {
    const std::vector<ServiceId> cluster{ServiceId{"wordpress", "wordpress", v, "slider"}};
    const bool hit = store::vulns_for_cluster(db, cluster).actionable;
    const bool in_range = v == "4.0" || v == "4.0.1" || v == "4.1.4";
    fixture_ok = fixture_ok && hit == in_range;
    if (hit) flagged += (flagged.empty() ? "" : ",") + v;
  }

  Rng rng(10000);
  auto random_version = [&] {
    std::string s = std::to_string(testkit::uniform(rng, 0, 20));
    const auto extra = testkit::uniform(rng, 0, 3);
    for (std::size_t i = 0; i < extra; ++i) s += "." + std::to_string(testkit::uniform(rng, 0, 20));
    if (testkit::chance(rng, 0.05)) s += "-rc" + std::to_string(testkit::uniform(rng, 1, 3));
    return s;
  };
  std::size_t agree = 0;
  for (std::size_t i = 0; i < kVersionPairs; ++i) {
    const auto v = random_version();
    auto lo = testkit::chance(rng, 0.1) ? std::string() : random_version();
    auto hi = testkit::chance(rng, 0.1) ? std::string() : random_version();
    if (!lo.empty() && !hi.empty() && !(testkit::padded_version_key(lo) < testkit::padded_version_key(hi))) {
      std::swap(lo, hi);
      if (testkit::padded_version_key(lo) == testkit::padded_version_key(hi)) hi.clear();
    }
    agree += store::version_in_range(*Version::parse(v), lo, hi) == testkit::range_contains_oracle(v, lo, hi);
  }
  return {fixture_ok && agree == kVersionPairs,
          "flagged [" + flagged + "] for range [4.0, 4.1.5); interval oracle agrees on " + std::to_string(agree) + "/" +
              std::to_string(kVersionPairs) + " pairs"};
}

}  // namespace

int main() {
  const auto corpora = file_corpora();
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
      {"oracle-equivalence", [&] { return oracle_equivalence(corpora); }},
      {"identification-soundness", [&] { return soundness(corpora); }},
      {"three-hop-path", three_hop_path},
      {"request-efficiency", request_efficiency},
      {"extraction-round-trip", round_trips},
      {"simulator-closure", closure},
      {"corp-blocking", corp_blocking},
      {"vulnerability-join", vulnerability_join},
  };
  int failures = 0;
  for (const auto& [name, check] : criteria) {
    Verdict v;
    try {
      v = check();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    failures += !v.pass;
    std::cout << (v.pass ? "PASS " : "FAIL ") << name << ": " << v.detail << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
