#include "corsica/cli/cli.hpp"

#include <CLI11.hpp>
#include <cstdlib>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "corsica/corpus/crawl.hpp"
#include "corsica/corpus/ingest.hpp"
#include "corsica/corpus/manifest.hpp"
#include "corsica/error.hpp"
#include "corsica/extract/vector.hpp"
#include "corsica/io.hpp"
#include "corsica/plan/plan.hpp"
#include "corsica/sim/sim.hpp"
#include "corsica/store/db.hpp"
#include "corsica/tree/tree.hpp"
#include "../json_codec.hpp"

namespace fs = std::filesystem;

namespace corsica::cli {

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Options {
  bool quiet = false;
  std::uint64_t seed = 0;  // reserved

  // ingest
  std::string kind, service, source, out, webroot;
  std::size_t max_pages = 50, max_depth_crawl = 3;
  bool allow_offhost = false;

  // shared inputs
  std::string input, oracle, corpus, targets, report_url, runtime, network, records, tree;
  std::vector<std::string> corpus_dirs;

  // build-tree
  bool metrics = false;
  std::size_t max_depth = 32, max_subfeatures = 5;

  // emit-plan
  std::uint32_t discovery_timeout = 3000, check_timeout = 3000;
  std::size_t max_parallel = 6;
  std::string probe_path = "/favicon.ico";

  // simulate
  bool corp_blocking = false;
};

std::string fixed2(double v) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(2) << v;
  return s.str();
}

void print_warnings(std::ostream& err, const std::vector<std::string>& warnings, bool quiet) {
  if (quiet) return;
  for (const auto& w : warnings) err << "warning: " << w << "\n";
}

int cmd_ingest(const Options& o, std::ostream& out, std::ostream& err) {
  const auto service = ServiceId::parse(o.service);
  corpus::ServiceFileSet set;
  if (o.kind == "install") {
    set = corpus::ingest_install_tree(o.source, service);
  } else if (o.kind == "firmware") {
    set = corpus::ingest_firmware_root(o.source, o.webroot.empty() ? std::nullopt : std::optional<fs::path>(o.webroot),
                                       service);
  } else {
    corpus::CrawlLimits limits;
    limits.max_pages = o.max_pages;
    limits.max_depth = o.max_depth_crawl;
    limits.same_host_only = !o.allow_offhost;
    auto result = corpus::crawl_live(o.source, service, limits);
    print_warnings(err, result.warnings, o.quiet);
    set = std::move(result.set);
  }
  const auto dir = corpus::add_to_corpus(o.out, set);
  if (!o.quiet) out << "ingested " << set.files.size() << " files for " << service.str() << " into " << dir.string() << "\n";
  return 0;
}

int cmd_extract(const Options& o, std::ostream& out, std::ostream& err) {
  const auto sets = corpus::load_corpus(o.input);
  std::vector<extract::FeatureVector> vectors;
  extract::Diagnostics diag;
  std::size_t features = 0;
  for (const auto& s : sets) {
    vectors.push_back(extract::build_feature_vector(s, {}, &diag));
    features += vectors.back().features.size();
  }
  auto db = store::make_db(std::move(vectors), store::default_metadata(fs::absolute(o.input).lexically_normal().string()));
  store::save_db(db, o.out);
  print_warnings(err, diag.warnings, o.quiet);
  if (!o.quiet) out << "extracted " << features << " features from " << sets.size() << " services\n";
  return 0;
}

std::vector<extract::UnverifiableEntry> load_compat_report(const fs::path& path) {
  const auto j = parse_json(read_file(path), path.string());
  return with_schema_context(path.string(), [&] {
    if (!j.is_object() || j.value("schema_version", 0) != 1) {
      throw SchemaError(path.string() + ": missing or unsupported schema_version");
    }
    std::vector<extract::UnverifiableEntry> entries;
    for (const auto& e : j.at("unverifiable")) {
      extract::UnverifiableEntry entry{std::nullopt, e.at("path").get<std::string>(),
                                       subfeature_from_json(e.at("subfeature"))};
      if (e.contains("service")) entry.service = service_from_json(e.at("service"));
      entries.push_back(std::move(entry));
    }
    return entries;
  });
}

int cmd_normalize(const Options& o, std::ostream& out, std::ostream&) {
  auto db = store::load_db(o.input);
  extract::CompatOracle oracle;
  if (o.oracle == "sim") {
    const auto dir = !o.corpus.empty() ? o.corpus : db.metadata.source;
    if (dir.empty()) throw DataError("the sim oracle needs the corpus: pass --corpus");
    oracle = sim::sim_oracle(corpus::load_corpus(dir));
  } else {
    oracle = extract::report_oracle(load_compat_report(o.oracle));
  }
  extract::NormalizeStats total;
  for (auto& v : db.vectors) {
    extract::NormalizeStats stats;
    v = extract::normalize_vector(v, oracle, &stats);
    total.flagged += stats.flagged;
    total.dropped_features += stats.dropped_features;
  }
  store::save_db(db, o.out.empty() ? o.input : o.out);
  if (!o.quiet) {
    out << "flagged " << total.flagged << " subfeatures unverifiable, dropped " << total.dropped_features
        << " features\n";
  }
  return 0;
}

void print_metrics(std::ostream& out, const tree::TreeMetrics& m) {
  out << "services          " << m.service_count << "\n"
      << "leaves            " << m.leaf_count << "\n"
      << "unique leaves     " << m.unique_leaves << "\n"
      << "avg cluster size  " << m.cluster_size_num << "/" << m.cluster_size_den << " (" << fixed2(m.avg_cluster_size())
      << ")\n"
      << "requests min      " << m.min_path << "\n"
      << "requests avg      " << fixed2(m.avg_path) << "\n"
      << "requests max      " << m.max_path << "\n";
}

int cmd_build_tree(const Options& o, std::ostream& out, std::ostream&) {
  const auto db = store::load_db(o.input);
  tree::TreeConfig config;
  config.max_depth = o.max_depth;
  config.max_subfeatures = o.max_subfeatures;
  const auto t = tree::build_tree(db.vectors, config);
  write_file_atomic(o.out, tree::serialize_tree(t));
  if (o.metrics) print_metrics(out, tree::tree_metrics(t, db.vectors));
  return 0;
}

int cmd_emit_plan(const Options& o, std::ostream& out, std::ostream&) {
  auto t = tree::parse_tree(read_file(o.input));
  auto targets = plan::parse_targets(read_file(o.targets));
  plan::Limits limits{o.max_parallel, o.check_timeout};
  plan::Discovery discovery{o.discovery_timeout, o.probe_path};
  const auto p = plan::emit_plan(std::move(t), std::move(targets), limits, discovery);
  write_file_atomic(o.out, plan::serialize_plan(p));
  if (!o.quiet) out << "plan with " << p.targets.size() << " targets written to " << o.out << "\n";
  return 0;
}

int cmd_emit_probe(const Options& o, std::ostream& out, std::ostream&) {
  const auto p = plan::parse_plan(read_file(o.input));
  std::string bundle = o.runtime;
  if (bundle.empty()) {
    if (const char* env = std::getenv("CORSICA_RUNTIME_BUNDLE"); env && *env) bundle = env;
  }
  if (bundle.empty()) throw DataError("missing probe runtime bundle: pass --runtime or set CORSICA_RUNTIME_BUNDLE");
  if (!fs::exists(bundle)) throw DataError("missing probe runtime bundle: " + bundle);
  write_file_atomic(o.out, plan::emit_probe_page(p, o.report_url, read_file(bundle)));
  if (!o.quiet) out << "probe page written to " << o.out << "\n";
  return 0;
}

std::string cluster_text(const std::vector<ServiceId>& cluster) {
  std::string s;
  for (std::size_t i = 0; i < cluster.size(); ++i) s += (i ? ", " : "") + cluster[i].str();
  return s.empty() ? "-" : s;
}

void print_report(std::ostream& out, const plan::ScanReport& report) {
  out << std::left << std::setw(24) << "target" << std::setw(7) << "alive" << std::setw(10) << "requests"
      << std::setw(10) << "result" << "cluster\n";
  for (const auto& t : report.targets) {
    out << std::setw(24) << t.target.key() << std::setw(7) << (t.alive ? "yes" : "no") << std::setw(10)
        << t.requests_used << std::setw(10) << plan::to_string(plan::classify(t)) << cluster_text(t.cluster)
        << (t.not_in_corpus ? " (not in corpus?)" : "") << "\n";
  }
  const auto s = plan::summarize(report);
  out << "\nUnique  Multiple  No match  Alive  Targets  Requests\n"
      << std::setw(8) << s.unique << std::setw(10) << s.multiple << std::setw(10) << s.none << std::setw(7) << s.alive
      << std::setw(9) << s.targets << s.requests << "\n";
}

int cmd_simulate(const Options& o, std::ostream& out, std::ostream&) {
  const auto p = plan::parse_plan(read_file(o.input));
  const auto network = sim::load_network(o.network);
  const auto report = sim::run_plan(network, p, {o.corp_blocking});
  write_file_atomic(o.out, plan::serialize_report(report));
  if (!o.quiet) print_report(out, report);
  return 0;
}

int cmd_stats(const Options& o, std::ostream& out, std::ostream&) {
  corpus::FileTypeHistogram hist;
  for (const auto& dir : o.corpus_dirs) hist.merge(corpus::corpus_stats(corpus::load_corpus(dir)));
  out << std::left << std::setw(12) << "extension" << "files\n";
  for (const auto& [ext, count] : hist.ranked()) out << std::setw(12) << ext << count << "\n";
  out << std::setw(12) << "total" << hist.total() << "\n";
  return 0;
}

int cmd_vulns(const Options& o, std::ostream& out, std::ostream& err) {
  auto annotated = store::annotate_vulns(store::load_db(o.input), store::load_vuln_records(o.records));
  print_warnings(err, annotated.dangling, o.quiet);
  const auto& db = annotated.db;
  if (!o.out.empty()) store::save_db(db, o.out);
  std::vector<std::vector<ServiceId>> clusters;
  if (!o.tree.empty()) {
    const auto t = tree::parse_tree(read_file(o.tree));
    for (auto leaf : t.leaves()) clusters.push_back(t.nodes[leaf].cluster);
  } else {
    for (const auto& v : db.vectors) clusters.push_back({v.service});
  }
  std::size_t actionable = 0, partial = 0;
  for (const auto& c : clusters) {
    const auto r = store::vulns_for_cluster(db, c);
    if (r.matches.empty()) continue;
    actionable += r.actionable;
    partial += r.partial;
    out << (r.actionable ? "actionable  " : "partial     ") << cluster_text(c) << "\n";
    for (const auto& [s, rec] : r.matches) {
      out << "    " << s.str() << "  " << store::to_string(rec.vuln_class) << "  [" << rec.introduced << ", "
          << rec.fixed << ")  " << rec.reference << "\n";
    }
  }
  out << "clusters " << clusters.size() << "  actionable " << actionable << "  partial " << partial
      << "  dangling records " << annotated.dangling.size() << "\n";
  return 0;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Learn web-service fingerprints from file corpora and plan cross-origin probes.", "corsica"};
  app.require_subcommand(1);
  Options o;
  app.add_flag("--quiet,-q", o.quiet, "Suppress progress output and warnings");
  app.add_option("--seed", o.seed, "Reserved; the pipeline is deterministic");

  auto* ingest = app.add_subcommand("ingest", "Add a service's files to a corpus directory");
  ingest->add_option("--kind", o.kind, "install, firmware or crawl")->required()->check(CLI::IsMember({"install", "firmware", "crawl"}));
  ingest->add_option("--service", o.service, "vendor:product:version[:component]")->required();
  ingest->add_option("source", o.source, "Install tree, unpacked rootfs or base URL")->required();
  ingest->add_option("--out", o.out, "Corpus directory")->required();
  ingest->add_option("--webroot", o.webroot, "Webroot inside the rootfs (firmware)");
  ingest->add_option("--max-pages", o.max_pages, "Crawl page budget");
  ingest->add_option("--max-depth", o.max_depth_crawl, "Crawl link depth");
  ingest->add_flag("--allow-offhost", o.allow_offhost, "Follow links to other hosts");

  auto* extract = app.add_subcommand("extract", "Build feature vectors for every service in a corpus");
  extract->add_option("corpus", o.input, "Corpus directory")->required();
  extract->add_option("--out", o.out, "vectors.json")->required();

  auto* normalize = app.add_subcommand("normalize", "Flag subfeatures a probe cannot verify");
  normalize->add_option("vectors", o.input, "vectors.json")->required();
  normalize->add_option("--oracle", o.oracle, "sim, or a compatibility report JSON")->required();
  normalize->add_option("--corpus", o.corpus, "Corpus for the sim oracle (default: the one recorded in vectors.json)");
  normalize->add_option("--out", o.out, "Output (default: rewrite the input)");

  auto* build = app.add_subcommand("build-tree", "Compile feature vectors into a decision tree");
  build->add_option("vectors", o.input, "vectors.json")->required();
  build->add_option("--out", o.out, "tree.json")->required();
  build->add_flag("--metrics", o.metrics, "Print tree metrics");
  build->add_option("--max-depth", o.max_depth, "Depth limit")->check(CLI::PositiveNumber);
  build->add_option("--max-subfeatures", o.max_subfeatures, "Subfeatures per check")->check(CLI::PositiveNumber);

  auto* emit_plan = app.add_subcommand("emit-plan", "Bundle a tree with targets into a probe plan");
  emit_plan->add_option("tree", o.input, "tree.json")->required();
  emit_plan->add_option("--targets", o.targets, "targets.txt")->required();
  emit_plan->add_option("--out", o.out, "plan.json")->required();
  emit_plan->add_option("--discovery-timeout-ms", o.discovery_timeout, "Discovery timeout");
  emit_plan->add_option("--probe-path", o.probe_path, "Discovery resource");
  emit_plan->add_option("--check-timeout-ms", o.check_timeout, "Per-check timeout");
  emit_plan->add_option("--max-parallel", o.max_parallel, "Concurrent checks");

  auto* emit_probe = app.add_subcommand("emit-probe", "Render a self-contained probe page");
  emit_probe->add_option("plan", o.input, "plan.json")->required();
  emit_probe->add_option("--report-url", o.report_url, "Where the page posts its report")->required();
  emit_probe->add_option("--out", o.out, "probe.html")->required();
  emit_probe->add_option("--runtime", o.runtime, "Probe runtime bundle (default: $CORSICA_RUNTIME_BUNDLE)");

  auto* simulate = app.add_subcommand("simulate", "Run a plan against a modeled network");
  simulate->add_option("plan", o.input, "plan.json")->required();
  simulate->add_option("--network", o.network, "Network fixture JSON")->required();
  simulate->add_option("--out", o.out, "report.json")->required();
  simulate->add_flag("--corp-blocking", o.corp_blocking, "Model cross-origin resource blocking");

  auto* stats = app.add_subcommand("stats", "File-extension histogram of one or more corpora");
  stats->add_option("corpus", o.corpus_dirs, "Corpus directories")->required();

  auto* vulns = app.add_subcommand("vulns", "Join vulnerability records to identification clusters");
  vulns->add_option("db", o.input, "vectors.json / corpus db")->required();
  vulns->add_option("--records", o.records, "Vulnerability records JSON")->required();
  vulns->add_option("--tree", o.tree, "Report per leaf cluster of this tree");
  vulns->add_option("--out", o.out, "Write the annotated db here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "corsica: " << e.what() << "\n";
    return 1;
  }

  try {
    const auto* sub = app.get_subcommands().front();
    const auto name = sub->get_name();
    if (name == "ingest") return cmd_ingest(o, out, err);
    if (name == "extract") return cmd_extract(o, out, err);
    if (name == "normalize") return cmd_normalize(o, out, err);
    if (name == "build-tree") return cmd_build_tree(o, out, err);
    if (name == "emit-plan") return cmd_emit_plan(o, out, err);
    if (name == "emit-probe") return cmd_emit_probe(o, out, err);
    if (name == "simulate") return cmd_simulate(o, out, err);
    if (name == "stats") return cmd_stats(o, out, err);
    if (name == "vulns") return cmd_vulns(o, out, err);
    throw UsageError("unknown subcommand " + name);
  } catch (const UsageError& e) {
    err << "corsica: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "corsica: error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace corsica::cli
