#include <gtest/gtest.h>

#include "corsica/error.hpp"
#include "corsica/plan/plan.hpp"
#include "generators.hpp"

using namespace corsica;
using namespace corsica::plan;
using namespace corsica::extract;

namespace {

tree::DecisionTree small_tree() {
  std::vector<FeatureVector> v{
      {ServiceId::parse("acme:cms:1.0"), {make_feature("a.png", FileType::image, {ImageDimension{1, 2}})}},
      {ServiceId::parse("acme:cms:2.0"),
       {make_feature("x/</script><!--.css", FileType::css,
                     {CssDirective{SelectorKind::id, "a", "div", "color", "rgb(1, 2, 3)"}})}}};
  return tree::build_tree(v);
}

TargetReport alive_report(std::vector<Step> steps, std::vector<ServiceId> cluster) {
  TargetReport r;
  r.target = {"10.0.0.1", 80, "http"};
  r.alive = true;
  r.requests_used = steps.size();
  r.path_taken = std::move(steps);
  r.cluster = std::move(cluster);
  return r;
}

}  // namespace

TEST(Targets, Parse) {
  auto t = parse_targets("# lab\n10.0.0.1\n\nhttps://router.local\nhttp://cam:8080  \n");
  ASSERT_EQ(t.size(), 3u);
  EXPECT_EQ(t[0], (Target{"10.0.0.1", 80, "http"}));
  EXPECT_EQ(t[1], (Target{"router.local", 443, "https"}));
  EXPECT_EQ(t[2], (Target{"cam", 8080, "http"}));
  EXPECT_EQ(t[2].key(), "cam:8080");
  EXPECT_THROW(parse_targets("host:99999"), DataError);
  EXPECT_THROW(parse_targets("ftp://host"), DataError);
}

TEST(Plan, EmitValidates) {
  auto t = small_tree();
  EXPECT_NO_THROW(emit_plan(t, {{"a", 80, "http"}}));
  EXPECT_THROW(emit_plan(t, {{"a", 80, "http"}, {"a", 80, "http"}}), DataError);
  EXPECT_THROW(emit_plan(t, {{"a", 80, "http"}}, Limits{0, 3000}), DataError);
  EXPECT_THROW(emit_plan(t, {{"a", 80, "http"}}, Limits{6, 0}), DataError);
  EXPECT_THROW(emit_plan(t, {{"a", 80, "http"}}, {}, Discovery{0, "/favicon.ico"}), DataError);
  EXPECT_THROW(emit_plan(t, {{"a", 80, "http"}}, {}, Discovery{100, "favicon.ico"}), DataError);
}

TEST(Plan, RoundTrip) {
  auto plan = emit_plan(small_tree(), parse_targets("10.0.0.1\nhttps://b:8443\n"), Limits{3, 1500},
                        Discovery{2000, "/robots.txt"});
  const auto text = serialize_plan(plan);
  auto back = parse_plan(text);
  EXPECT_EQ(back, plan);
  EXPECT_EQ(serialize_plan(back), text);
  EXPECT_THROW(parse_plan("{\"schema_version\": 3}"), SchemaError);
  EXPECT_THROW(parse_plan("not json"), DataError);
}

TEST(ProbePage, SelfContainedAndStable) {
  auto plan = emit_plan(small_tree(), parse_targets("10.0.0.1\n"));
  const std::string runtime = "console.log('</script>'); runProbe();";
  auto page = emit_probe_page(plan, "https://collector.example/report", runtime);
  EXPECT_EQ(page, emit_probe_page(plan, "https://collector.example/report", runtime));

  // Exactly the three inline scripts close; nothing is fetched from elsewhere.
  std::size_t closes = 0;
  for (auto pos = page.find("</script"); pos != std::string::npos; pos = page.find("</script", pos + 1)) ++closes;
  EXPECT_EQ(closes, 3u);
  EXPECT_EQ(page.find(" src="), std::string::npos);
  EXPECT_EQ(page.find("<link"), std::string::npos);
  EXPECT_EQ(page.find("<!--"), std::string::npos);
  EXPECT_NE(page.find("window.CORSICA_REPORT_URL = \"https://collector.example/report\";"), std::string::npos);

  // The embedded block parses back to the plan.
  const std::string open = "<script id=\"corsica-plan\" type=\"application/json\">\n";
  const auto begin = page.find(open);
  ASSERT_NE(begin, std::string::npos);
  const auto body_begin = begin + open.size();
  const auto end = page.find("</script>", body_begin);
  const auto embedded = page.substr(body_begin, end - body_begin);
  EXPECT_EQ(embedded, embedded_plan_json(plan));
  EXPECT_EQ(parse_plan(embedded), plan);
}

TEST(ProbePage, InputsValidated) {
  auto plan = emit_plan(small_tree(), parse_targets("10.0.0.1\n"));
  EXPECT_THROW(emit_probe_page(plan, "https://c/report", ""), DataError);
  EXPECT_THROW(emit_probe_page(plan, "https://c/report", "  \n"), DataError);
  EXPECT_THROW(emit_probe_page(plan, "javascript:alert(1)", "run()"), DataError);
}

TEST(Report, ClassifyAndSummarize) {
  const auto a = ServiceId::parse("acme:cms:1.0");
  const auto b = ServiceId::parse("acme:cms:2.0");
  ScanReport report;
  report.targets.push_back(alive_report({{"a.png", tree::Outcome::match, true}}, {a}));
  report.targets.push_back(alive_report({{"a.png", tree::Outcome::mismatch, true}}, {a, b}));
  report.targets.push_back(alive_report({{"a.png", tree::Outcome::mismatch, false}}, {b}));
  auto caveat = alive_report({{"a.png", tree::Outcome::match, true}}, {a});
  caveat.not_in_corpus = true;
  report.targets.push_back(caveat);
  TargetReport dead;
  dead.target = {"10.0.0.9", 80, "http"};
  dead.errors = {"discovery: no response"};
  report.targets.push_back(dead);
  report.targets.push_back(alive_report({}, {a}));  // root leaf: nothing to observe

  EXPECT_EQ(classify(report.targets[0]), Identification::unique);
  EXPECT_EQ(classify(report.targets[1]), Identification::multiple);
  EXPECT_EQ(classify(report.targets[2]), Identification::none);
  EXPECT_EQ(classify(report.targets[3]), Identification::none);
  EXPECT_EQ(classify(report.targets[4]), Identification::none);
  EXPECT_EQ(classify(report.targets[5]), Identification::unique);

  auto s = summarize(report);
  EXPECT_EQ(s.targets, 6u);
  EXPECT_EQ(s.alive, 5u);
  EXPECT_EQ(s.unique, 2u);
  EXPECT_EQ(s.multiple, 1u);
  EXPECT_EQ(s.none, 3u);
  EXPECT_EQ(s.requests, 4u);

  const auto text = serialize_report(report);
  EXPECT_EQ(parse_report(text), report);
}

TEST(Report, RequestAccountingValidated) {
  ScanReport report;
  report.targets.push_back(alive_report({{"a.png", tree::Outcome::match, true}}, {ServiceId::parse("a:b:1")}));
  report.targets[0].requests_used = 2;
  EXPECT_THROW(parse_report(serialize_report(report)), SchemaError);
  report.discovery_counted = true;
  EXPECT_EQ(parse_report(serialize_report(report)), report);

  ScanReport dead_with_hops;
  dead_with_hops.targets.push_back(alive_report({{"a.png", tree::Outcome::match, true}}, {}));
  dead_with_hops.targets[0].alive = false;
  EXPECT_THROW(parse_report(serialize_report(dead_with_hops)), SchemaError);
  EXPECT_THROW(parse_report("{\"schema_version\":1,\"discovery_counted\":false,\"targets\":[{\"host\":\"h\"}]}"),
               SchemaError);
}
