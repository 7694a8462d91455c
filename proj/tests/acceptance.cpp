// Acceptance suite: one PASS/FAIL line per criterion; nonzero exit on any FAIL.

#include <sys/resource.h>
#include <sys/wait.h>

#include <chrono>
#include <cstdio>
#include <functional>
#include <numeric>
#include <random>

#include <fmt/ranges.h>
#include <json.hpp>

#include "csd/analytics.hpp"
#include "csd/diversity.hpp"
#include "csd/error.hpp"
#include "csd/predictor.hpp"
#include "csd/stats.hpp"
#include "planted.hpp"
#include "support.hpp"

using namespace csd;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::vector<NodeId> all_nodes(const CitationGraph& g) {
  std::vector<NodeId> out;
  for (std::uint32_t i = 0; i < g.node_count(); ++i) out.push_back(NodeId{i});
  return out;
}

int run_cli(const std::string& args) {
  auto cmd = fmt::format("'{}' {}", CSD_BIN, args);
  int st = std::system(cmd.c_str());
  return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
}

Outcome golden() {
  auto t0 = Clock::now();
  auto corpus = parse_corpus(testing::fixture("f1.jsonl"), CorpusFormat::canonical);
  auto g = build_graph(corpus);
  auto e = load_embeddings(testing::fixture("f1_vecs.jsonl"), &corpus);
  auto r = diversity_of(g, &e.table, g.node("1"), ThresholdPolicy::fixed(0.85, 0.7));
  std::array<std::optional<std::size_t>, 6> want{4, 2, 3, 3, 2, 1};
  double s = seconds_since(t0);
  std::vector<std::string> got;
  for (auto v : r.sd) got.push_back(v ? fmt::format("{}", *v) : "-");
  return {r.sd == want && s < 1.0, fmt::format("sd = ({}) in {:.3f} s", fmt::join(got, ", "), s)};
}

Outcome component_oracle() {
  auto t0 = Clock::now();
  std::mt19937 rng(500);
  std::size_t count_mismatch = 0, variant_mismatch = 0, targets = 0;
  for (int trial = 0; trial < 500; ++trial) {
    int n = 1 + static_cast<int>(rng() % 30);
    double p = 0.1 + 0.4 * (rng() % 1001) / 1000.0;
    auto dg = testing::random_digraph(rng, n, p);
    auto g = build_graph(testing::corpus_of(dg));
    auto vecs = testing::random_vectors(rng, n, 4);
    auto table = testing::table_of(vecs);

    std::vector<int> s;
    std::vector<NodeId> sn;
    for (int i = 0; i < n; ++i) {
      if (rng() % 2) {
        s.push_back(i);
        sn.push_back(NodeId{static_cast<std::uint32_t>(i)});
      }
    }
    auto uf = connected_component_count(base_graph(induced_subgraph(g, sn)));
    if (static_cast<int>(uf) != oracle::dfs_components(s, oracle::direct(dg, s))) ++count_mismatch;

    double t1 = (rng() % 1000) / 1000.0, t2 = (rng() % 1000) / 1000.0;
    auto sim = [&](int a, int b) { return oracle::cosine(vecs[a], vecs[b]); };
    auto results = compute_all(g, &table, all_nodes(g), ThresholdPolicy::fixed(t1, t2));
    for (int v = 0; v < n; ++v) {
      ++targets;
      auto want = oracle::variant_counts(dg, v, sim, t1, t2);
      for (std::size_t i = 0; i < 6; ++i) {
        if (!results[v].sd[i] || static_cast<int>(*results[v].sd[i]) != want[i]) {
          ++variant_mismatch;
          break;
        }
      }
    }
  }
  double s = seconds_since(t0);
  return {count_mismatch == 0 && variant_mismatch == 0 && s < 30.0,
          fmt::format("500 graphs, {} count mismatches, {} of {} targets with variant mismatches, {:.2f} s",
                      count_mismatch, variant_mismatch, targets, s)};
}

Outcome monotonicity() {
  std::mt19937 rng(200);
  std::size_t violations = 0, checked = 0;
  for (int trial = 0; trial < 200; ++trial) {
    int n = 2 + static_cast<int>(rng() % 24);
    auto dg = testing::random_digraph(rng, n, 0.05 + 0.4 * (rng() % 1000) / 1000.0);
    auto g = build_graph(testing::corpus_of(dg));
    auto vecs = testing::random_vectors(rng, n, 3);
    auto table = testing::table_of(vecs);
    double t1 = (rng() % 2000) / 1000.0 - 1.0, t2 = (rng() % 2000) / 1000.0 - 1.0;
    double t1b = t1 + (rng() % 1000) / 1000.0, t2b = t2 + (rng() % 1000) / 1000.0;
    auto targets = all_nodes(g);
    auto lo = compute_all(g, &table, targets, ThresholdPolicy::fixed(t1, t2));
    auto hi1 = compute_all(g, &table, targets, ThresholdPolicy::fixed(t1b, t2));
    auto hi2 = compute_all(g, &table, targets, ThresholdPolicy::fixed(t1, t2b));
    for (std::size_t i = 0; i < targets.size(); ++i) {
      if (lo[i].n_refs == 0) continue;
      ++checked;
      std::array<std::size_t, 6> x{};
      for (std::size_t k = 0; k < 6; ++k) x[k] = *lo[i].sd[k];
      auto [r, c, ss, cs, scs, css] = x;
      bool ok = true;
      for (auto v : x) ok = ok && v >= 1 && v <= lo[i].n_refs;
      ok = ok && c <= r && ss <= r && cs <= r && cs >= c;
      ok = ok && scs <= std::min(ss, cs) && css <= std::min(c, ss);
      ok = ok && *hi1[i].value(Variant::semantic_enhanced) >= ss;
      ok = ok && *hi2[i].value(Variant::combined_enhanced) >= cs;
      if (!ok) ++violations;
    }
  }
  return {violations == 0, fmt::format("200 instances, {} targets checked, {} violations", checked, violations)};
}

Outcome statistics() {
  using V = std::vector<double>;
  std::vector<std::string> failed;
  double r = *stats::pearson(V{1, 2, 3, 4}, V{1, 3, 2, 4});
  if (std::abs(r - 0.8) > 1e-12) failed.push_back(fmt::format("pearson={:.17g}", r));
  double iq = stats::iqr_mean(V{1, 2, 3, 4, 5, 6, 7, 8});
  if (iq != 4.0) failed.push_back(fmt::format("iqr_mean={:.17g}", iq));

  std::mt19937 rng(1000);
  std::uniform_real_distribution<double> u(0, 1000);
  double worst_sum = 0;
  for (int i = 0; i < 1000; ++i) {
    V q(10);
    for (auto& x : q) x = u(rng);
    q[rng() % 10] += 1.0;  // nonzero
    auto n = normalize_trend(q);
    worst_sum = std::max(worst_sum, std::abs(std::accumulate(n.begin(), n.end(), 0.0) - 1.0));
  }
  if (worst_sum > 1e-12) failed.push_back(fmt::format("normalize sum error {:.3g}", worst_sum));

  std::normal_distribution<double> z(0, 1);
  double worst_affine = 0;
  for (int i = 0; i < 1000; ++i) {
    std::size_t n = 3 + rng() % 50;
    V x(n), y(n), ax(n);
    for (std::size_t k = 0; k < n; ++k) {
      x[k] = z(rng);
      y[k] = x[k] * 0.3 + z(rng);
    }
    double a = (rng() % 2 ? 1 : -1) * (0.01 + std::abs(z(rng)) * 10), b = z(rng) * 100;
    for (std::size_t k = 0; k < n; ++k) ax[k] = a * x[k] + b;
    auto r0 = stats::pearson(x, y), r1 = stats::pearson(ax, y);
    double want = a > 0 ? *r0 : -*r0;
    worst_affine = std::max(worst_affine, std::abs(*r1 - want));
  }
  if (worst_affine > 1e-10) failed.push_back(fmt::format("affine error {:.3g}", worst_affine));
  return {failed.empty(), failed.empty() ? fmt::format("pearson=0.8, iqr_mean=4, sum err {:.2g}, affine err {:.2g}",
                                                       worst_sum, worst_affine)
                                         : fmt::format("{}", fmt::join(failed, "; "))};
}

Outcome prediction() {
  std::mt19937 rng(798);
  FeatureSet fs;
  fs.horizon = 1;
  fs.variant = Variant::plain;
  for (std::size_t i = 0; i < 200; ++i) {
    std::size_t refs = rng() % 60, sd = 1 + rng() % 12;
    sd = std::min(sd, std::max<std::size_t>(refs, 1));
    fs.rows.push_back(FeatureRow{fmt::format("p{:03d}", i), refs, rng() % 20, sd, 3 * refs + 2 * sd + 1});
  }
  auto run = evaluate(fs, ModelKind::linear, {0.8, 42});
  bool linear_ok = run.r2 && *run.r2 >= 1 - 1e-9 && run.mse <= 1e-9;

  auto parts = split(fs.rows, {0.8, 42});
  auto model = fit_knn(parts.train, 7);
  std::vector<std::vector<double>> x;
  std::vector<double> y;
  for (auto& r : parts.train) {
    x.push_back(feature_vector(r));
    y.push_back(static_cast<double>(r.target));
  }
  std::vector<std::vector<double>> queries;
  for (int q = 0; q < 50; ++q) {
    queries.push_back({static_cast<double>(rng() % 60), static_cast<double>(rng() % 20),
                       static_cast<double>(1 + rng() % 12)});
  }
  auto got = predict_knn(model, queries);
  std::size_t mismatches = 0;
  for (std::size_t q = 0; q < queries.size(); ++q) {
    if (got[q] != oracle::knn(x, y, queries[q], 7)) ++mismatches;
  }
  return {linear_ok && mismatches == 0,
          fmt::format("linear R2={:.12f} MSE={:.3g}; knn {} of 50 queries differ from oracle",
                      run.r2.value_or(std::nan("")), run.mse, mismatches)};
}

Outcome end_to_end() {
  auto t0 = Clock::now();
  auto dir = testing::scratch("acceptance_e2e");
  planted::DiversityCohort spec{{77, 51, 77, 85, 75, 116}};
  auto records = planted::cohort_records(spec, 2024);
  std::vector<double> xs{1, 2, 3, 4, 5, 6}, ys(spec.medians.begin(), spec.medians.end());
  double planted_r = oracle::pearson(xs, ys);

  std::string raw;
  for (const auto& r : records) raw += to_canonical_line(r) + "\n";
  io::write_file_atomic(dir / "raw.jsonl", raw);
  auto p = [&](const char* name) { return (dir / name).string(); };

  std::string detail;
  bool ok = run_cli(fmt::format("ingest --corpus '{}' --out '{}' > /dev/null", p("raw.jsonl"), p("corpus.jsonl"))) == 0 &&
            run_cli(fmt::format("sd --corpus '{}' --venue TGT --variant plain --out '{}'", p("corpus.jsonl"),
                                p("sd.csv"))) == 0 &&
            run_cli(fmt::format("correlate --corpus '{}' --diversity '{}' --venue TGT --variant plain "
                                "--stat median --out '{}'",
                                p("corpus.jsonl"), p("sd.csv"), p("out"))) == 0;
  if (!ok) {
    fs::remove_all(dir);
    return {false, "pipeline command failed"};
  }
  std::optional<double> r;
  std::size_t papers = 0;
  for (const auto& e : nlohmann::json::parse(io::read_file(dir / "out" / "correlation.json"))) {
    if (e["mode"] == "grouped" && e["stat"] == "median" && !e["r"].is_null()) r = e["r"].get<double>();
  }
  papers = records.size();
  double s = seconds_since(t0);
  fs::remove_all(dir);
  bool pass = r && std::abs(*r - 0.70) <= 0.02 && s < 60.0;
  return {pass, fmt::format("{} papers, planted r={:.6f}, recovered r={}, {:.2f} s", papers, planted_r,
                            r ? fmt::format("{:.6f}", *r) : "undefined", s)};
}

long peak_rss_kb() {
  rusage u{};
  ::getrusage(RUSAGE_SELF, &u);
  return u.ru_maxrss;
}

Outcome ingestion() {
  auto dir = testing::scratch("acceptance_ingest");
  auto records = planted::random_records(100000, 20, 97, 802);
  std::string text;
  for (const auto& r : records) text += to_canonical_line(r) + "\n";
  records.clear();
  records.shrink_to_fit();
  io::write_file_atomic(dir / "big.jsonl", text);
  text.clear();
  text.shrink_to_fit();

  std::vector<std::string> fingerprints;
  double worst = 0;
  std::size_t nodes = 0, edges = 0;
  for (int run = 0; run < 2; ++run) {
    auto t0 = Clock::now();
    auto corpus = parse_corpus(dir / "big.jsonl", CorpusFormat::canonical);
    auto g = build_graph(corpus);
    worst = std::max(worst, seconds_since(t0));
    nodes = g.node_count();
    edges = g.edge_count();
    fingerprints.push_back(serialize_canonical(corpus) + edge_list(g));
  }
  fs::remove_all(dir);
  double gb = static_cast<double>(peak_rss_kb()) / (1024.0 * 1024.0);
  bool same = fingerprints[0] == fingerprints[1];
  return {worst < 30.0 && gb < 2.0 && same,
          fmt::format("{} nodes, {} edges, slowest run {:.2f} s, peak RSS {:.2f} GB, deterministic={}", nodes,
                      edges, worst, gb, same)};
}

}  // namespace

int main() {
  std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"golden F1 fixture", golden},
      {"component-count oracle", component_oracle},
      {"monotonicity lattice", monotonicity},
      {"statistics exactness", statistics},
      {"prediction harness", prediction},
      {"end-to-end correlation", end_to_end},
      {"ingestion performance", ingestion},
  };
  int failures = 0;
  for (auto& [name, check] : criteria) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, fmt::format("exception: {}", e.what())};
    }
    if (!o.pass) ++failures;
    std::printf("%s %s: %s\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
