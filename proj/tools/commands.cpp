#include "commands.hpp"

#include <algorithm>
#include <filesystem>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>
#include <spdlog/spdlog.h>

#include "csd/analytics.hpp"
#include "csd/corpus.hpp"
#include "csd/diversity.hpp"
#include "csd/error.hpp"
#include "csd/graph.hpp"
#include "csd/io.hpp"
#include "csd/parallel.hpp"
#include "csd/predictor.hpp"
#include "csd/semantic.hpp"

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

namespace csd::cli {

namespace {

struct Options {
  std::string config;
  std::string corpus;
  std::string format = "canonical";
  std::string embeddings;
  std::string diversity;
  double theta1 = 0;
  double theta2 = 0;
  CLI::Option* theta1_opt = nullptr;
  CLI::Option* theta2_opt = nullptr;
  std::string theta_policy = "dblp";
  std::vector<std::string> variants;
  std::vector<std::string> stats;
  std::vector<int> horizons;
  std::vector<std::string> models;
  std::vector<std::string> targets;
  int year = 0;
  CLI::Option* year_opt = nullptr;
  std::string venue;
  std::string rank;
  int window = 3;
  std::uint64_t seed = 0;
  std::string out;
  unsigned threads = 0;
  // ingest cleaning
  bool require_title = false;
  bool require_abstract = false;
  std::size_t min_refs = 0;
  bool drop_dangling = false;
};

struct Inputs {
  Corpus corpus;
  CitationGraph graph;
  std::optional<LoadedEmbeddings> embeddings;

  const EmbeddingTable* table() const { return embeddings ? &embeddings->table : nullptr; }
};

const std::vector<std::string> kFormats = {"canonical", "dblp_v13", "pubmed"};

CLI::Validator variant_check() {
  return CLI::Validator(
      [](std::string& s) -> std::string {
        return parse_variant(s) ? std::string() : "unknown variant '" + s + "'";
      },
      "VARIANT");
}

Variant variant_of(const std::string& s) { return *parse_variant(s); }

std::vector<Variant> selected_variants(const Options& o, std::vector<Variant> fallback) {
  if (o.variants.empty()) return fallback;
  std::vector<Variant> out;
  for (const auto& s : o.variants) {
    auto v = variant_of(s);
    if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
  }
  std::sort(out.begin(), out.end());
  return out;
}

void add_corpus_flags(CLI::App* c, Options& o) {
  c->add_option("--corpus", o.corpus, "Corpus file")->required();
  c->add_option("--format", o.format, "Corpus format")->check(CLI::IsMember(kFormats));
  c->add_option("--threads", o.threads, "Worker threads (0 = all cores)");
}

void add_config_flag(CLI::App* c, Options& o) {
  c->add_option("--config", o.config, "JSON file of flag values; command-line flags win");
}

void add_selection_flags(CLI::App* c, Options& o) {
  c->add_option("--targets", o.targets, "Target paper ids (comma separated or repeated)")
      ->delimiter(',')
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
  o.year_opt = c->add_option("--year", o.year, "Select papers published in this year");
  c->add_option("--venue", o.venue, "Select papers from this venue");
  c->add_option("--rank", o.rank, "Select papers with this venue rank (Q1..Q4, A, B, C)");
}

void add_diversity_flags(CLI::App* c, Options& o) {
  c->add_option("--embeddings", o.embeddings, "Embedding JSON Lines file");
  o.theta1_opt = c->add_option("--theta1", o.theta1, "Fixed theta1 for every target");
  o.theta2_opt = c->add_option("--theta2", o.theta2, "Fixed theta2 for every target");
  c->add_option("--theta-policy", o.theta_policy, "Per-target threshold rules")
      ->check(CLI::IsMember({"dblp", "pubmed"}));
  c->add_option("--diversity", o.diversity, "Reuse a diversity CSV from `sd` instead of recomputing");
}

void add_variant_flag(CLI::App* c, Options& o, const char* help) {
  c->add_option("--variant", o.variants, help)
      ->delimiter(',')
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll)
      ->check(variant_check());
}

Inputs load_inputs(const Options& o, bool with_embeddings) {
  ParseOptions popts{o.threads};
  auto fmt_ = parse_corpus_format(o.format);
  Inputs in;
  in.corpus = parse_corpus(o.corpus, *fmt_, popts);
  const auto& ing = in.corpus.provenance().ingest;
  spdlog::info("parsed {} records from {} ({} malformed)", ing.parsed, o.corpus, ing.malformed);
  in.graph = build_graph(in.corpus);
  spdlog::info("graph: {} nodes, {} edges, {} dangling references skipped", in.graph.node_count(),
               in.graph.edge_count(), in.graph.skipped_dangling());
  if (with_embeddings && !o.embeddings.empty()) {
    in.embeddings = load_embeddings(o.embeddings, &in.corpus);
    const auto& cov = in.embeddings->coverage;
    if (!cov.missing.empty()) spdlog::warn("{} papers have no embedding", cov.missing.size());
    if (!cov.unresolved.empty()) {
      spdlog::warn("{} embedding ids are not in the corpus", cov.unresolved.size());
    }
  }
  return in;
}

ThresholdPolicy policy_of(const Options& o) {
  auto p = o.theta_policy == "pubmed" ? ThresholdPolicy::pubmed() : ThresholdPolicy::dblp();
  if (o.theta1_opt && o.theta1_opt->count()) p.theta1_override = o.theta1;
  if (o.theta2_opt && o.theta2_opt->count()) p.theta2_override = o.theta2;
  return p;
}

std::vector<NodeId> select_targets(const Inputs& in, const Options& o) {
  std::vector<NodeId> out;
  if (!o.targets.empty()) {
    for (const auto& id : o.targets) {
      auto n = in.graph.find(id);
      if (!n) throw UsageError(fmt::format("target '{}' is not in the corpus", id));
      out.push_back(*n);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }
  GroupSpec spec;
  if (o.year_opt && o.year_opt->count()) spec.year = o.year;
  if (!o.venue.empty()) spec.venue = o.venue;
  if (!o.rank.empty()) spec.rank = parse_venue_rank(o.rank);
  if (spec.any()) {
    for (const auto& id : select_group(in.corpus, spec)) out.push_back(*in.graph.find(id));
    if (out.empty()) throw DataError("no papers match the selected group");
    return out;
  }
  out.reserve(in.graph.node_count());
  for (std::uint32_t i = 0; i < in.graph.node_count(); ++i) out.push_back(NodeId{i});
  return out;
}

std::vector<DiversityResult> diversity_results(const Inputs& in, const Options& o) {
  auto targets = select_targets(in, o);
  if (o.diversity.empty()) {
    return compute_all(in.graph, in.table(), targets, policy_of(o), resolve_threads(o.threads));
  }
  auto all = parse_diversity_csv(io::read_file(o.diversity), in.graph);
  std::vector<DiversityResult> out;
  for (auto& r : all) {
    if (std::binary_search(targets.begin(), targets.end(), r.target)) out.push_back(std::move(r));
  }
  std::sort(out.begin(), out.end(),
            [](const DiversityResult& a, const DiversityResult& b) { return a.target < b.target; });
  if (out.empty()) throw DataError("diversity file has no rows for the selected papers");
  return out;
}

fs::path prepare_dir(const std::string& dir) {
  fs::path p(dir);
  std::error_code ec;
  fs::create_directories(p, ec);
  if (ec) throw DataError(fmt::format("cannot create {}: {}", dir, ec.message()));
  return p;
}

void emit(const Options& o, const std::string& content) {
  if (o.out.empty()) {
    fmt::print("{}", content);
  } else {
    io::write_file_atomic(o.out, content);
    spdlog::info("wrote {}", o.out);
  }
}

ojson clean_report_json(const CleanReport& r) {
  ojson j;
  j["removed_missing_title"] = r.removed_missing_title;
  j["removed_missing_abstract"] = r.removed_missing_abstract;
  j["removed_few_references"] = r.removed_few_references;
  j["dangling_references_dropped"] = r.dangling_references_dropped;
  j["rounds"] = r.rounds;
  return j;
}

void run_ingest(const Options& o) {
  if (o.out.empty()) throw UsageError("ingest: --out is required");
  auto corpus = parse_corpus(o.corpus, *parse_corpus_format(o.format), ParseOptions{o.threads});
  CleanPolicy policy{o.require_title, o.require_abstract, o.min_refs, o.drop_dangling};
  auto cleaned = clean(corpus, policy);
  write_canonical(cleaned.corpus, o.out);

  const auto& ing = corpus.provenance().ingest;
  ojson j;
  j["source"] = o.corpus;
  j["format"] = o.format;
  j["parsed"] = ing.parsed;
  j["malformed"] = ing.malformed;
  j["self_references_dropped"] = ing.self_references_dropped;
  j["duplicate_references_dropped"] = ing.duplicate_references_dropped;
  j["cleaning"] = clean_report_json(cleaned.report);
  j["records_out"] = cleaned.corpus.size();
  fmt::print("{}\n", j.dump(2));
}

void run_component(const Options& o) {
  if (o.out.empty()) throw UsageError("component: --out is required");
  auto corpus = parse_corpus(o.corpus, *parse_corpus_format(o.format), ParseOptions{o.threads});
  auto lwc = largest_weak_component(corpus);
  write_canonical(lwc, o.out);
  spdlog::info("largest weak component: {} of {} records", lwc.size(), corpus.size());
}

void run_sd(const Options& o) {
  auto in = load_inputs(o, true);
  auto results = diversity_results(in, o);
  auto keep = selected_variants(o, {kVariants.begin(), kVariants.end()});
  for (auto& r : results) {
    for (auto v : kVariants) {
      if (std::find(keep.begin(), keep.end(), v) == keep.end()) r.sd[index_of(v)].reset();
    }
    if (!r.error.empty()) spdlog::debug("{}: {}", in.graph.id_of(r.target), r.error);
  }
  emit(o, diversity_csv(in.graph, results));
}

std::vector<StatKind> selected_stats(const Options& o) {
  if (o.stats.empty()) return {StatKind::median, StatKind::iqr_mean};
  std::vector<StatKind> out;
  for (const auto& s : o.stats) {
    auto k = *parse_stat_kind(s);
    if (std::find(out.begin(), out.end(), k) == out.end()) out.push_back(k);
  }
  return out;
}

std::vector<CorrelationReport> correlations(const Inputs& in, const std::vector<DiversityResult>& results,
                                            Variant v, const Options& o) {
  auto points = diversity_points(in.graph, results, v, o.window);
  std::vector<CorrelationReport> out;
  for (auto stat : selected_stats(o)) {
    for (auto mode : {CorrelationMode::grouped, CorrelationMode::per_paper}) {
      auto rep = correlation_by_diversity(points, stat, mode);
      rep.variant = std::string(column_name(v));
      out.push_back(std::move(rep));
    }
  }
  return out;
}

void run_correlate(const Options& o) {
  auto in = load_inputs(o, true);
  auto results = diversity_results(in, o);
  std::vector<CorrelationReport> reports;
  for (auto v : selected_variants(o, {Variant::plain})) {
    auto part = correlations(in, results, v, o);
    reports.insert(reports.end(), part.begin(), part.end());
  }
  auto json = ojson::array();
  for (const auto& r : reports) json.push_back(ojson::parse(correlation_json(r)));
  if (o.out.empty()) {
    fmt::print("{}\n", json.dump());
    return;
  }
  auto dir = prepare_dir(o.out);
  io::write_file_atomic(dir / "correlation.csv", correlation_csv(reports));
  io::write_file_atomic(dir / "correlation.json", json.dump(2) + "\n");
}

void run_trends(const Options& o) {
  auto in = load_inputs(o, true);
  auto results = diversity_results(in, o);
  auto vs = selected_variants(o, {Variant::plain});
  if (vs.size() != 1) throw UsageError("trends takes a single --variant");
  auto report = trend_by_bin(trend_inputs(in.graph, results, vs.front()));
  for (auto b : report.omitted) spdlog::warn("bin {} has no papers", to_string(b));
  if (o.out.empty()) {
    fmt::print("{}", trends_csv(report));
    return;
  }
  auto dir = prepare_dir(o.out);
  io::write_file_atomic(dir / "trends.csv", trends_csv(report));
}

std::vector<int> selected_horizons(const Options& o) {
  if (o.horizons.empty()) return {kHorizons.begin(), kHorizons.end()};
  std::vector<int> out(o.horizons.begin(), o.horizons.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<ModelKind> selected_models(const Options& o) {
  if (o.models.empty()) return {ModelKind::linear, ModelKind::knn};
  std::vector<ModelKind> out;
  if (std::count(o.models.begin(), o.models.end(), "linear")) out.push_back(ModelKind::linear);
  if (std::count(o.models.begin(), o.models.end(), "knn")) out.push_back(ModelKind::knn);
  return out;
}

ojson run_json(const PredictionRun& run, const FeatureSet& fs) {
  auto j = ojson::parse(metrics_json(run));
  j["rank_deficient"] = run.rank_deficient;
  j["excluded_undated"] = fs.excluded_undated;
  j["excluded_no_sd"] = fs.excluded_no_sd;
  j["excluded_censored"] = fs.excluded_censored;
  return j;
}

// Baseline plus each selected variant, per horizon and model.
ojson predictions(const Inputs& in, const std::vector<DiversityResult>& results, const Options& o,
                  const fs::path* feature_dir) {
  std::vector<std::optional<Variant>> modes{std::nullopt};
  for (auto v : selected_variants(o, {Variant::plain})) modes.emplace_back(v);
  auto runs = ojson::array();
  for (int h : selected_horizons(o)) {
    for (const auto& mode : modes) {
      auto fs = assemble_features(in.graph, results, mode, h);
      if (feature_dir) {
        export_features(fs, *feature_dir / fmt::format("features_{}_h{}.csv", fs.mode_name(), h));
      }
      if (fs.rows.size() < 5) {
        throw DataError(fmt::format("horizon {}: only {} usable rows for {}, need 5", h,
                                    fs.rows.size(), fs.mode_name()));
      }
      for (auto m : selected_models(o)) {
        runs.push_back(run_json(evaluate(fs, m, SplitSpec{0.8, o.seed}), fs));
      }
    }
  }
  return runs;
}

void run_predict(const Options& o) {
  for (int h : o.horizons) {
    if (!valid_horizon(h)) throw UsageError(fmt::format("--horizon must be 1, 5 or 10 (got {})", h));
  }
  auto in = load_inputs(o, true);
  auto results = diversity_results(in, o);
  if (o.out.empty()) {
    fmt::print("{}\n", predictions(in, results, o, nullptr).dump());
    return;
  }
  auto dir = prepare_dir(o.out);
  auto runs = predictions(in, results, o, &dir);
  io::write_file_atomic(dir / "metrics.json", runs.dump(2) + "\n");
}

ojson optional_json(const std::optional<double>& v) { return v ? ojson(*v) : ojson(nullptr); }

void run_report(const Options& o) {
  auto in = load_inputs(o, true);
  auto results = diversity_results(in, o);
  const auto policy = policy_of(o);

  ojson j;
  j["seed"] = o.seed;
  j["corpus"] = {{"source", o.corpus},
                 {"format", o.format},
                 {"papers", in.graph.node_count()},
                 {"citations", in.graph.edge_count()},
                 {"dangling_references", in.graph.skipped_dangling()}};
  j["embeddings"] = in.embeddings ? ojson{{"source", o.embeddings},
                                          {"vectors", in.embeddings->table.size()},
                                          {"dim", in.embeddings->table.dim()},
                                          {"missing", in.embeddings->coverage.missing.size()}}
                                  : ojson(nullptr);
  j["thresholds"] = {{"policy", o.theta_policy},
                     {"theta1", optional_json(policy.theta1_override)},
                     {"theta2", optional_json(policy.theta2_override)}};
  j["targets"] = results.size();

  auto variants = in.table() ? selected_variants(o, {kVariants.begin(), kVariants.end()})
                             : selected_variants(o, {Variant::plain, Variant::combined});
  auto div = ojson::object();
  for (auto v : variants) {
    std::size_t n = 0;
    double sum = 0;
    for (const auto& r : results) {
      if (auto x = r.value(v)) {
        ++n;
        sum += static_cast<double>(*x);
      }
    }
    div[std::string(column_name(v))] = {{"computed", n},
                                        {"mean", n ? ojson(sum / static_cast<double>(n)) : ojson(nullptr)}};
  }
  j["diversity"] = div;

  auto corr = ojson::array();
  for (auto v : variants) {
    try {
      for (const auto& r : correlations(in, results, v, o)) corr.push_back(ojson::parse(correlation_json(r)));
    } catch (const DataError& e) {
      corr.push_back({{"variant", column_name(v)}, {"error", e.what()}});
    }
  }
  j["correlation"] = corr;

  auto trends = ojson::object();
  for (auto v : variants) {
    auto rep = trend_by_bin(trend_inputs(in.graph, results, v));
    auto series = ojson::array();
    for (const auto& s : rep.series) {
      series.push_back({{"bin", to_string(s.bin)}, {"n_papers", s.n_papers}, {"mean_normalized", s.mean_normalized}});
    }
    trends[std::string(column_name(v))] = series;
  }
  j["trends"] = trends;

  try {
    j["prediction"] = predictions(in, results, o, nullptr);
  } catch (const DataError& e) {
    j["prediction"] = {{"error", e.what()}};
  }

  try {
    j["topic_correlation"] = optional_json(topic_correlation(results, in.graph, in.corpus, variants.front()));
  } catch (const DataError&) {
    j["topic_correlation"] = nullptr;
  }
  emit(o, j.dump(2) + "\n");
}

}  // namespace

void register_commands(CLI::App& app) {
  auto o = std::make_shared<Options>();

  auto* ingest = app.add_subcommand("ingest", "Parse a corpus, clean it and write canonical JSON Lines");
  add_config_flag(ingest, *o);
  add_corpus_flags(ingest, *o);
  ingest->add_option("--out", o->out, "Canonical corpus output file")->required();
  ingest->add_flag("--require-title", o->require_title, "Drop records with an empty title");
  ingest->add_flag("--require-abstract", o->require_abstract, "Drop records with an empty abstract");
  ingest->add_option("--min-refs", o->min_refs, "Drop records with fewer references");
  ingest->add_flag("--drop-dangling", o->drop_dangling, "Remove references to papers not in the corpus");
  ingest->callback([o] { run_ingest(*o); });

  o = std::make_shared<Options>();
  auto* component = app.add_subcommand("component", "Keep the largest weakly connected component");
  add_config_flag(component, *o);
  add_corpus_flags(component, *o);
  component->add_option("--out", o->out, "Canonical corpus output file")->required();
  component->callback([o] { run_component(*o); });

  o = std::make_shared<Options>();
  auto* sd = app.add_subcommand("sd", "Structural diversity per target (CSV)");
  add_config_flag(sd, *o);
  add_corpus_flags(sd, *o);
  add_diversity_flags(sd, *o);
  add_selection_flags(sd, *o);
  add_variant_flag(sd, *o, "Variants to report (default: all six)");
  sd->add_option("--out", o->out, "CSV output file (default: stdout)");
  sd->callback([o] { run_sd(*o); });

  o = std::make_shared<Options>();
  auto* correlate = app.add_subcommand("correlate", "Correlate diversity with early citations");
  add_config_flag(correlate, *o);
  add_corpus_flags(correlate, *o);
  add_diversity_flags(correlate, *o);
  add_selection_flags(correlate, *o);
  add_variant_flag(correlate, *o, "Variants to correlate (default: plain)");
  correlate->add_option("--stat", o->stats, "Group statistic (default: both)")
      ->delimiter(',')
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll)
      ->check(CLI::IsMember({"median", "iqrmean"}));
  correlate->add_option("--window", o->window, "Citation window in years from publication")
      ->check(CLI::PositiveNumber);
  correlate->add_option("--out", o->out, "Output directory for correlation.csv and correlation.json");
  correlate->callback([o] { run_correlate(*o); });

  o = std::make_shared<Options>();
  auto* trends = app.add_subcommand("trends", "Normalised 10-year citation trends per diversity bin");
  add_config_flag(trends, *o);
  add_corpus_flags(trends, *o);
  add_diversity_flags(trends, *o);
  add_selection_flags(trends, *o);
  add_variant_flag(trends, *o, "Variant used for binning (default: plain)");
  trends->add_option("--out", o->out, "Output directory for trends.csv");
  trends->callback([o] { run_trends(*o); });

  o = std::make_shared<Options>();
  auto* predict = app.add_subcommand("predict", "Citation prediction with and without diversity features");
  add_config_flag(predict, *o);
  add_corpus_flags(predict, *o);
  add_diversity_flags(predict, *o);
  add_selection_flags(predict, *o);
  add_variant_flag(predict, *o, "Variants added to the baseline features (default: plain)");
  predict->add_option("--horizon", o->horizons, "Prediction horizons in years (1, 5, 10; default: all)")
      ->delimiter(',')
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
  predict->add_option("--model", o->models, "linear, knn (default: both)")
      ->delimiter(',')
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll)
      ->check(CLI::IsMember({"linear", "knn"}));
  predict->add_option("--seed", o->seed, "Train/test split seed");
  predict->add_option("--out", o->out, "Output directory for metrics.json and feature CSVs");
  predict->callback([o] { run_predict(*o); });

  o = std::make_shared<Options>();
  auto* report = app.add_subcommand("report", "One JSON summary of diversity, correlation, trends and prediction");
  add_config_flag(report, *o);
  add_corpus_flags(report, *o);
  add_diversity_flags(report, *o);
  add_selection_flags(report, *o);
  add_variant_flag(report, *o, "Variants to summarise (default: all six)");
  report->add_option("--stat", o->stats, "Group statistic (default: both)")
      ->delimiter(',')
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll)
      ->check(CLI::IsMember({"median", "iqrmean"}));
  report->add_option("--window", o->window, "Citation window in years from publication")
      ->check(CLI::PositiveNumber);
  report->add_option("--horizon", o->horizons, "Prediction horizons (default: all)")
      ->delimiter(',')
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
  report->add_option("--model", o->models, "linear, knn (default: both)")
      ->delimiter(',')
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll)
      ->check(CLI::IsMember({"linear", "knn"}));
  report->add_option("--seed", o->seed, "Train/test split seed");
  report->add_option("--out", o->out, "Summary JSON file (default: stdout)");
  report->callback([o] { run_report(*o); });
}

std::vector<std::string> config_arguments(const std::vector<std::string>& args) {
  std::string path;
  std::set<std::string> given;
  for (std::size_t i = 0; i < args.size(); ++i) {
    const auto& a = args[i];
    if (!a.starts_with("--")) continue;
    auto eq = a.find('=');
    auto key = a.substr(2, eq == std::string::npos ? std::string::npos : eq - 2);
    given.insert(key);
    if (key == "config") {
      if (eq != std::string::npos) {
        path = a.substr(eq + 1);
      } else if (i + 1 < args.size()) {
        path = args[i + 1];
      }
    }
  }
  if (path.empty()) return {};

  nlohmann::json j;
  try {
    j = nlohmann::json::parse(io::read_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw DataError(fmt::format("config {}: {}", path, e.what()));
  }
  if (!j.is_object()) throw DataError(fmt::format("config {}: expected a JSON object", path));

  auto scalar = [&](const std::string& key, const nlohmann::json& v) -> std::string {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number()) return v.dump();
    throw DataError(fmt::format("config {}: unsupported value for '{}'", path, key));
  };
  std::vector<std::string> out;
  for (const auto& [raw, value] : j.items()) {
    std::string key = raw;
    std::replace(key.begin(), key.end(), '_', '-');
    if (key == "config" || given.count(key)) continue;
    if (value.is_boolean()) {
      if (value.get<bool>()) out.push_back("--" + key);
    } else if (value.is_array()) {
      for (const auto& item : value) {
        out.push_back("--" + key);
        out.push_back(scalar(key, item));
      }
    } else {
      out.push_back("--" + key);
      out.push_back(scalar(key, value));
    }
  }
  return out;
}

}  // namespace csd::cli
