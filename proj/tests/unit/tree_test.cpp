#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "corsica/corpus/ingest.hpp"
#include "corsica/error.hpp"
#include "corsica/extract/vector.hpp"
#include "corsica/tree/tree.hpp"
#include "generators.hpp"

using namespace corsica;
using namespace corsica::extract;
using namespace corsica::tree;
using testkit::fixture_dir;

namespace {

std::vector<FeatureVector> cms_vectors() {
  std::vector<FeatureVector> out;
  for (auto name : {"wordpress-4.6.1", "wordpress-4.7.0", "wordpress-4.7.5", "typo3-4.7.5", "typo3-4.7.6",
                    "typo3-6.2.0"}) {
    std::string s = name;
    const auto dash = s.find('-');
    const auto product = s.substr(0, dash);
    auto set = corpus::ingest_install_tree(fixture_dir() / "cms" / s,
                                           ServiceId{product, product, s.substr(dash + 1), ""});
    out.push_back(build_feature_vector(set));
  }
  return out;
}

Feature image_at(std::string path, std::uint32_t w = 1, std::uint32_t h = 1) {
  return make_feature(std::move(path), FileType::image, {ImageDimension{w, h}});
}

FeatureVector vec(std::string version, std::vector<Feature> features) {
  std::sort(features.begin(), features.end(), [](const auto& a, const auto& b) { return a.path < b.path; });
  return {ServiceId{"v", "p", std::move(version), ""}, std::move(features)};
}

std::vector<std::vector<ServiceId>> leaf_clusters(const DecisionTree& t) {
  std::vector<std::vector<ServiceId>> out;
  for (auto i : t.leaves()) out.push_back(t.nodes[i].cluster);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::vector<ServiceId>> sorted(std::vector<std::vector<ServiceId>> c) {
  std::sort(c.begin(), c.end());
  return c;
}

}  // namespace

TEST(CheckOutcome, Examples) {
  auto v = vec("1", {make_feature("s.css", FileType::css,
                                  {CssDirective{SelectorKind::id, "a", "div", "color", "rgb(0, 0, 0)"},
                                   CssDirective{SelectorKind::id, "b", "div", "width", "1px"}})});
  FeatureCheck both{"s.css", FileType::css,
                    {CssDirective{SelectorKind::id, "b", "div", "width", "1px"},
                     CssDirective{SelectorKind::id, "a", "div", "color", "rgb(0, 0, 0)"}}};
  EXPECT_EQ(check_outcome(v, both), Outcome::match);
  FeatureCheck wrong{"s.css", FileType::css, {CssDirective{SelectorKind::id, "b", "div", "width", "2px"}}};
  EXPECT_EQ(check_outcome(v, wrong), Outcome::mismatch);
  FeatureCheck elsewhere{"t.css", FileType::css, both.checks};
  EXPECT_EQ(check_outcome(v, elsewhere), Outcome::mismatch);

  // Unverifiable subfeatures cannot satisfy a check.
  auto flagged = v;
  flagged.features[0].compat[1] = Compat::unverifiable;
  EXPECT_EQ(check_outcome(flagged, both), Outcome::mismatch);
}

TEST(CheckFor, TakesVerifiedPrefix) {
  auto f = make_feature("a.js", FileType::js, {});
  for (int i = 0; i < 7; ++i) {
    f.subfeatures.push_back(JsSymbol{"s" + std::to_string(i), SymbolKind::variable, std::nullopt, std::nullopt});
    f.compat.push_back(i == 0 ? Compat::unverifiable : Compat::verified);
  }
  auto c = check_for(f, 5);
  ASSERT_TRUE(c);
  ASSERT_EQ(c->checks.size(), 5u);
  EXPECT_EQ(std::get<JsSymbol>(c->checks[0]).name, "s1");
  for (auto& x : f.compat) x = Compat::unverifiable;
  EXPECT_FALSE(check_for(f, 5));
}

TEST(Tree, ThreeHopPathToTypo3) {
  auto vectors = cms_vectors();
  auto t = build_tree(vectors);
  const auto* target = &vectors[4];
  ASSERT_EQ(target->service.str(), "typo3:typo3:4.7.6");
  std::vector<Hop> hops;
  auto leaf = t.leaf_for(*target, &hops);
  ASSERT_EQ(hops.size(), 3u);
  EXPECT_EQ(t.nodes[hops[0].node].check->path, "wp-includes/js/crop/cropper.js");
  EXPECT_EQ(hops[0].outcome, Outcome::mismatch);
  EXPECT_EQ(t.nodes[hops[1].node].check->path, "typo3/sysext/t3skin/images/btn-sprite.gif");
  EXPECT_EQ(hops[1].outcome, Outcome::match);
  EXPECT_EQ(t.nodes[hops[2].node].check->path, "typo3/js/extjs/ux/SearchField.js");
  EXPECT_EQ(hops[2].outcome, Outcome::match);
  EXPECT_EQ(t.nodes[leaf].cluster, std::vector<ServiceId>{target->service});
}

TEST(Tree, CmsLeavesMatchEquivalenceClasses) {
  auto vectors = cms_vectors();
  auto t = build_tree(vectors);
  EXPECT_EQ(leaf_clusters(t), sorted(equivalence_classes(vectors)));
  EXPECT_EQ(leaf_clusters(t), testkit::group_by_canonical_form(vectors));
}

TEST(Tree, SingleServiceIsALeaf) {
  std::vector<FeatureVector> one{vec("1", {image_at("a.png")})};
  auto t = build_tree(one);
  ASSERT_EQ(t.nodes.size(), 1u);
  EXPECT_TRUE(t.nodes[t.root].is_leaf());
  auto m = tree_metrics(t, one);
  EXPECT_EQ(m.min_path, 0u);
  EXPECT_EQ(m.max_path, 0u);
  EXPECT_EQ(m.unique_leaves, 1u);
}

TEST(Tree, DisjointServicesSplitAtDepthOne) {
  std::vector<FeatureVector> v{vec("1", {image_at("a.png")}), vec("2", {image_at("b.png")})};
  auto t = build_tree(v);
  EXPECT_EQ(t.nodes.size(), 3u);
  auto m = tree_metrics(t, v);
  EXPECT_EQ(m.min_path, 1u);
  EXPECT_EQ(m.max_path, 1u);
}

TEST(Tree, EmptyAndDuplicateInputsRejected) {
  EXPECT_THROW(build_tree(std::vector<FeatureVector>{}), DataError);
  std::vector<FeatureVector> dup{vec("1", {}), vec("1", {})};
  EXPECT_THROW(build_tree(dup), DataError);
}

TEST(Tree, IndistinguishableServicesShareALeaf) {
  std::vector<FeatureVector> v{vec("1", {image_at("a.png")}), vec("2", {image_at("a.png")}), vec("3", {})};
  auto t = build_tree(v);
  EXPECT_EQ(leaf_clusters(t).size(), 2u);
  auto leaf = t.leaf_for(v[0]);
  EXPECT_EQ(t.nodes[leaf].cluster.size(), 2u);
}

TEST(Metrics, PerfectTreeOfEight) {
  std::vector<FeatureVector> v;
  for (int bits = 0; bits < 8; ++bits) {
    std::vector<Feature> f;
    for (int b = 0; b < 3; ++b) {
      if (bits & (1 << b)) f.push_back(image_at("f" + std::to_string(b) + ".png"));
    }
    v.push_back(vec(std::to_string(bits + 1), f));
  }
  auto m = tree_metrics(build_tree(v), v);
  EXPECT_EQ(m.service_count, 8u);
  EXPECT_EQ(m.leaf_count, 8u);
  EXPECT_EQ(m.unique_leaves, 8u);
  EXPECT_EQ(m.min_path, 3u);
  EXPECT_EQ(m.max_path, 3u);
  EXPECT_DOUBLE_EQ(m.avg_path, 3.0);
  EXPECT_EQ(m.cluster_size_num, 1u);
  EXPECT_EQ(m.cluster_size_den, 1u);
}

TEST(Metrics, AverageClusterSizeOfHandPartition) {
  // Clusters {1,2} {3,4} {5} {6}: 6 services over 4 leaves.
  std::vector<FeatureVector> v{vec("1", {image_at("a.png")}), vec("2", {image_at("a.png")}),
                               vec("3", {image_at("b.png")}), vec("4", {image_at("b.png")}),
                               vec("5", {image_at("a.png"), image_at("b.png")}), vec("6", {})};
  auto t = build_tree(v);
  std::vector<std::size_t> sizes;
  for (const auto& c : leaf_clusters(t)) sizes.push_back(c.size());
  std::sort(sizes.begin(), sizes.end());
  EXPECT_EQ(sizes, (std::vector<std::size_t>{1, 1, 2, 2}));
  auto m = tree_metrics(t, v);
  EXPECT_EQ(m.cluster_size_num, 3u);
  EXPECT_EQ(m.cluster_size_den, 2u);
  EXPECT_DOUBLE_EQ(m.avg_cluster_size(), 1.5);
  EXPECT_EQ(m.unique_leaves, 2u);
}

TEST(Tree, DeterministicAndOrderIndependent) {
  testkit::Rng rng(5);
  auto v = testkit::random_vector_corpus(rng, {});
  auto t1 = build_tree(v);
  auto shuffled = v;
  std::shuffle(shuffled.begin(), shuffled.end(), rng);
  EXPECT_EQ(build_tree(shuffled), t1);
  EXPECT_EQ(serialize_tree(build_tree(v)), serialize_tree(t1));
}

class RandomCorpora : public ::testing::TestWithParam<int> {};

TEST_P(RandomCorpora, LeavesAreEquivalenceClassesAndWalksAreSound) {
  testkit::Rng rng(static_cast<std::uint64_t>(GetParam()));
  testkit::CorpusSpec spec;
  spec.services = testkit::uniform(rng, 2, 100);
  spec.paths = testkit::uniform(rng, 1, 40);
  spec.variants = testkit::uniform(rng, 1, 4);
  spec.presence = 0.3 + 0.6 * std::uniform_real_distribution<double>()(rng);
  spec.unverifiable = GetParam() % 3 == 0 ? 0.1 : 0.0;
  auto v = testkit::random_vector_corpus(rng, spec);
  auto t = build_tree(v);

  const auto oracle = testkit::group_by_canonical_form(v);
  EXPECT_EQ(leaf_clusters(t), oracle);
  EXPECT_EQ(sorted(equivalence_classes(v)), oracle);

  std::set<FeatureCheck> all_checks;
  for (const auto& n : t.nodes) {
    if (n.check) all_checks.insert(*n.check);
  }
  for (const auto& s : v) {
    std::vector<Hop> hops;
    auto leaf = t.leaf_for(s, &hops);
    const auto& cluster = t.nodes[leaf].cluster;
    EXPECT_TRUE(std::binary_search(cluster.begin(), cluster.end(), s.service));
    EXPECT_LE(hops.size(), all_checks.size());
    std::set<FeatureCheck> seen;
    for (const auto& h : hops) EXPECT_TRUE(seen.insert(*t.nodes[h.node].check).second);
    // Presence expectations hold for every member.
    for (const auto& e : t.nodes[leaf].expectations) EXPECT_EQ(s.find(e.path) != nullptr, e.present);
  }
}

INSTANTIATE_TEST_SUITE_P(Seeds, RandomCorpora, ::testing::Range(1, 21));

TEST(Tree, DepthLimitMergesClasses) {
  testkit::Rng rng(77);
  auto v = testkit::random_vector_corpus(rng, {});
  TreeConfig config;
  config.max_depth = 2;
  auto t = build_tree(v, config);
  auto m = tree_metrics(t, v);
  EXPECT_LE(m.max_path, 2u);
  EXPECT_LE(m.leaf_count, 4u);
  // Each leaf is a union of equivalence classes.
  const auto classes = equivalence_classes(v);
  for (const auto& cls : classes) {
    auto leaf = t.leaf_for(*std::find_if(v.begin(), v.end(), [&](const auto& x) { return x.service == cls[0]; }));
    for (const auto& s : cls) {
      EXPECT_TRUE(std::binary_search(t.nodes[leaf].cluster.begin(), t.nodes[leaf].cluster.end(), s));
    }
  }
}

TEST(Tree, WeightsBreakTies) {
  // Two equally good splits; the heavier side decides which is tested first.
  std::vector<FeatureVector> v{vec("1", {image_at("a.png")}), vec("2", {image_at("b.png")})};
  TreeConfig config;
  auto plain = build_tree(v, config);
  config.weights[v[1].service] = 5.0;
  auto weighted = build_tree(v, config);
  EXPECT_EQ(plain.nodes[plain.root].check->path, "a.png");
  EXPECT_EQ(weighted.nodes[weighted.root].check->path, "b.png");
}

TEST(TreeJson, RoundTripAndValidation) {
  auto vectors = cms_vectors();
  TreeConfig config;
  config.weights[vectors[0].service] = 2.5;
  auto t = build_tree(vectors, config);
  const auto text = serialize_tree(t);
  auto back = parse_tree(text);
  EXPECT_EQ(back, t);
  EXPECT_EQ(serialize_tree(back), text);

  EXPECT_THROW(parse_tree("{}"), SchemaError);
  auto wrong_version = text;
  wrong_version.replace(wrong_version.find("\"schema_version\": 1"), 19, "\"schema_version\": 9");
  EXPECT_THROW(parse_tree(wrong_version), SchemaError);

  // The same check twice on one path.
  DecisionTree bad;
  FeatureCheck c{"a.png", FileType::image, {ImageDimension{1, 1}}};
  bad.nodes = {Node{c, 1, 4, {}, {}}, Node{c, 2, 3, {}, {}}, Node{std::nullopt, 0, 0, {ServiceId::parse("a:b:1")}, {}},
               Node{std::nullopt, 0, 0, {ServiceId::parse("a:b:2")}, {}},
               Node{std::nullopt, 0, 0, {ServiceId::parse("a:b:3")}, {}}};
  EXPECT_THROW(parse_tree(serialize_tree(bad)), SchemaError);

  // One service in two leaves.
  DecisionTree twice;
  twice.nodes = {Node{c, 1, 2, {}, {}}, Node{std::nullopt, 0, 0, {ServiceId::parse("a:b:1")}, {}},
                 Node{std::nullopt, 0, 0, {ServiceId::parse("a:b:1")}, {}}};
  EXPECT_THROW(parse_tree(serialize_tree(twice)), SchemaError);
}
