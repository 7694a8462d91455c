#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "csd/diversity.hpp"
#include "csd/error.hpp"
#include "support.hpp"

using namespace csd;
using Catch::Approx;

namespace {

struct F1 {
  Corpus corpus = parse_corpus(testing::fixture("f1.jsonl"), CorpusFormat::canonical);
  CitationGraph g = build_graph(corpus);
  LoadedEmbeddings e = load_embeddings(testing::fixture("f1_vecs.jsonl"), &corpus);
  NodeId n(const char* id) const { return g.node(id); }
};

std::set<std::pair<std::string, std::string>> named(const CitationGraph& g,
                                                     const std::vector<UndirectedEdge>& edges) {
  std::set<std::pair<std::string, std::string>> out;
  for (auto e : edges) out.insert({g.id_of(e.a), g.id_of(e.b)});
  return out;
}

std::set<std::pair<std::string, std::string>> named(const std::set<oracle::Pair>& pairs) {
  std::set<std::pair<std::string, std::string>> out;
  for (auto [a, b] : pairs) out.insert({testing::node_name(a), testing::node_name(b)});
  return out;
}

using Names = std::set<std::pair<std::string, std::string>>;

// Random instance: graph, vectors for every node, and the oracle's view of
// pair similarity computed from the same floats.
struct Instance {
  oracle::Digraph dg{0};
  Corpus corpus;
  CitationGraph g;
  std::vector<std::vector<float>> vecs;
  EmbeddingTable table;

  double sim(int a, int b) const { return oracle::cosine(vecs[a], vecs[b]); }
};

Instance random_instance(std::mt19937& rng, int max_nodes, double p_lo, double p_hi) {
  Instance in;
  int n = 2 + static_cast<int>(rng() % (max_nodes - 1));
  double p = p_lo + (p_hi - p_lo) * (rng() % 1000) / 1000.0;
  in.dg = testing::random_digraph(rng, n, p);
  in.corpus = testing::corpus_of(in.dg);
  in.g = build_graph(in.corpus);
  in.vecs = testing::random_vectors(rng, n, 3);
  in.table = testing::table_of(in.vecs);
  return in;
}

std::array<int, 6> as_ints(const DiversityResult& r) {
  std::array<int, 6> out{};
  for (std::size_t i = 0; i < 6; ++i) out[i] = static_cast<int>(r.sd[i].value());
  return out;
}

}  // namespace

TEST_CASE("variant names") {
  CHECK(parse_variant("plain") == Variant::plain);
  CHECK(parse_variant("sd_scs") == Variant::semantic_combined_enhanced);
  CHECK(parse_variant("css") == Variant::combined_semantic_enhanced);
  CHECK(!parse_variant("sd_x"));
  CHECK(column_name(Variant::combined_enhanced) == "sd_cs");
  CHECK(!uses_similarity(Variant::combined));
  CHECK(uses_similarity(Variant::semantic_enhanced));
}

TEST_CASE("F1 golden values") {
  F1 f;
  auto r = diversity_of(f.g, &f.e.table, f.n("1"), ThresholdPolicy::fixed(0.85, 0.7));
  CHECK(as_ints(r) == std::array<int, 6>{4, 2, 3, 3, 2, 1});
  CHECK(r.n_refs == 5);
  CHECK(r.theta1 == 0.85);
  CHECK(r.theta2 == 0.7);
  CHECK(r.error.empty());
  std::array<std::size_t, 6> edges{};
  for (std::size_t i = 0; i < 6; ++i) edges[i] = *r.edges[i];
  CHECK(edges == std::array<std::size_t, 6>{1, 3, 2, 2, 3, 4});

  for (auto v : kVariants) {
    CHECK(structural_diversity(f.g, &f.e.table, f.n("1"), v, ThresholdPolicy::fixed(0.85, 0.7)) ==
          r.value(v));
  }
}

TEST_CASE("F1 edge sets") {
  F1 f;
  auto sims = ReferenceSimilarities::compute(f.g, f.e.table, f.n("1"));
  CHECK(named(f.g, co_citation_edges(f.g, f.n("1"))) == Names{{"3", "4"}});
  CHECK(named(f.g, coupling_edges(f.g, f.n("1"))) == Names{{"2", "6"}});
  CHECK(named(f.g, semantic_edges(f.g, sims, 0.85)) == Names{{"2", "3"}});
  CHECK(filtered_co_citation_edges(f.g, sims, 0.7).empty());
  CHECK(named(f.g, filtered_coupling_edges(f.g, sims, 0.7)) == Names{{"2", "6"}});
  CHECK(semantic_edges(f.g, sims, 0.95).empty());
  CHECK(filtered_coupling_edges(f.g, sims, 1.01).empty());
  CHECK(named(f.g, filtered_co_citation_edges(f.g, sims, 0.0)) == Names{{"3", "4"}});
}

TEST_CASE("co-citation by the target alone does not count") {
  Corpus c({PaperRecord{"v", "", "", {}, "", VenueRank::Unranked, {"a", "b"}, {}},
            PaperRecord{"a", "", "", {}, "", VenueRank::Unranked, {}, {}},
            PaperRecord{"b", "", "", {}, "", VenueRank::Unranked, {}, {}}});
  auto g = build_graph(c);
  CHECK(co_citation_edges(g, g.node("v")).empty());
  CHECK(coupling_edges(g, g.node("v")).empty());
}

TEST_CASE("citation-linked pairs never get similarity edges") {
  EmbeddingTable t(2);
  std::vector<float> same{1, 0};
  for (const char* id : {"v", "a", "b", "x"}) t.add(id, same);
  // a -> b directly, and both are co-cited by x
  Corpus c({PaperRecord{"v", "", "", {}, "", VenueRank::Unranked, {"a", "b"}, {}},
            PaperRecord{"a", "", "", {}, "", VenueRank::Unranked, {"b"}, {}},
            PaperRecord{"b", "", "", {}, "", VenueRank::Unranked, {}, {}},
            PaperRecord{"x", "", "", {}, "", VenueRank::Unranked, {"a", "b"}, {}}});
  auto g = build_graph(c);
  auto sims = ReferenceSimilarities::compute(g, t, g.node("v"));
  CHECK(semantic_edges(g, sims, 0.5).empty());
  CHECK(filtered_co_citation_edges(g, sims, 0.0).empty());
  CHECK(co_citation_edges(g, g.node("v")).size() == 1);
}

TEST_CASE("threshold resolution") {
  // target (1,0); refs at cosines 0.2, 0.4, 0.6 (and 0.1..0.4 below)
  auto unit = [](double c) { return std::vector<float>{static_cast<float>(c), static_cast<float>(std::sqrt(1 - c * c))}; };
  auto build = [&](std::vector<double> cs) {
    std::vector<PaperRecord> recs;
    EmbeddingTable t(2);
    PaperRecord v{"t", "", "", {}, "", VenueRank::Unranked, {}, {}};
    t.add("t", std::vector<float>{1, 0});
    for (std::size_t i = 0; i < cs.size(); ++i) {
      auto id = fmt::format("r{}", i);
      v.references.push_back(id);
      recs.push_back(PaperRecord{id, "", "", {}, "", VenueRank::Unranked, {}, {}});
      t.add(id, unit(cs[i]));
    }
    recs.push_back(v);
    return std::pair{build_graph(Corpus(recs)), std::move(t)};
  };

  auto [g3, t3] = build({0.2, 0.4, 0.6});
  auto s3 = ReferenceSimilarities::compute(g3, t3, g3.node("t"));
  CHECK(resolve_thresholds(s3, ThresholdPolicy::dblp()).theta1 == Approx(0.4).margin(1e-7));
  auto fixed = resolve_thresholds(s3, ThresholdPolicy::fixed(0.85, 0.7));
  CHECK(fixed.theta1 == 0.85);
  CHECK(fixed.theta2 == 0.7);

  auto [g4, t4] = build({0.3, 0.1, 0.4, 0.2});
  auto s4 = ReferenceSimilarities::compute(g4, t4, g4.node("t"));
  auto pm = resolve_thresholds(s4, ThresholdPolicy::pubmed());
  CHECK(pm.theta1 == Approx(0.1).margin(1e-7));
  CHECK(pm.theta2 == Approx((0.1 + 0.2 + 0.3) / 3).margin(1e-7));  // positions 1..3 of 4

  auto dblp = resolve_thresholds(s4, ThresholdPolicy::dblp());
  CHECK(dblp.theta1 == Approx(0.25).margin(1e-7));
  CHECK(dblp.theta2 == Approx(oracle::iqr_mean(s4.pairwise_values())).margin(1e-12));
  CHECK(s4.pairwise_values().size() == 6);

  auto [g1, t1] = build({0.5});
  auto s1 = ReferenceSimilarities::compute(g1, t1, g1.node("t"));
  CHECK(!try_resolve_thresholds(s1, ThresholdPolicy::dblp()).theta2);
  CHECK_THROWS_AS(resolve_thresholds(s1, ThresholdPolicy::dblp()), DataError);
  CHECK(try_resolve_thresholds(s1, ThresholdPolicy::pubmed()).theta2);
}

TEST_CASE("empty and singleton reference sets") {
  F1 f;
  auto policy = ThresholdPolicy::fixed(0.5, 0.5);
  auto empty = diversity_of(f.g, &f.e.table, f.n("5"), policy);
  for (auto v : kVariants) CHECK(empty.value(v) == 0u);
  auto single = diversity_of(f.g, &f.e.table, f.n("2"), policy);
  for (auto v : kVariants) CHECK(single.value(v) == 1u);
}

TEST_CASE("missing similarities leave semantic variants empty") {
  F1 f;
  auto r = diversity_of(f.g, nullptr, f.n("1"), ThresholdPolicy::fixed(0.85, 0.7));
  CHECK(r.value(Variant::plain) == 4u);
  CHECK(r.value(Variant::combined) == 2u);
  CHECK(!r.value(Variant::semantic_enhanced));
  CHECK(!r.error.empty());
  CHECK_THROWS_AS(structural_diversity(f.g, nullptr, f.n("1"), Variant::semantic_enhanced,
                                       ThresholdPolicy::fixed(0.85, 0.7)),
                  DataError);

  EmbeddingTable partial(8);
  for (const char* id : {"2", "3", "4", "5", "6"}) partial.add(id, *f.e.table.vector(id));
  auto no_target = diversity_of(f.g, &partial, f.n("1"), ThresholdPolicy::dblp());
  CHECK(!no_target.value(Variant::semantic_enhanced));
  CHECK(no_target.error.find("1") != std::string::npos);
  // fixed thresholds do not need the target's own vector
  auto fixed = diversity_of(f.g, &partial, f.n("1"), ThresholdPolicy::fixed(0.85, 0.7));
  CHECK(as_ints(fixed) == std::array<int, 6>{4, 2, 3, 3, 2, 1});
}

TEST_CASE("edge sets match the triple-loop oracle") {
  std::mt19937 rng(31);
  for (int trial = 0; trial < 300; ++trial) {
    auto in = random_instance(rng, 20, 0.05, 0.4);
    int v = static_cast<int>(rng() % in.dg.n);
    auto node = NodeId{static_cast<std::uint32_t>(v)};
    auto sims = ReferenceSimilarities::compute(in.g, in.table, node);
    auto sim = [&](int a, int b) { return in.sim(a, b); };
    double t1 = (rng() % 2000) / 1000.0 - 1.0, t2 = (rng() % 2000) / 1000.0 - 1.0;
    auto e1 = oracle::co_citation(in.dg, v);
    auto e2 = oracle::coupling(in.dg, v);
    REQUIRE(named(in.g, co_citation_edges(in.g, node)) == named(e1));
    REQUIRE(named(in.g, coupling_edges(in.g, node)) == named(e2));
    REQUIRE(named(in.g, semantic_edges(in.g, sims, t1)) == named(oracle::semantic(in.dg, v, sim, t1)));
    REQUIRE(named(in.g, filtered_co_citation_edges(in.g, sims, t2)) == named(oracle::filtered(in.dg, e1, sim, t2)));
    REQUIRE(named(in.g, filtered_coupling_edges(in.g, sims, t2)) == named(oracle::filtered(in.dg, e2, sim, t2)));
  }
}

TEST_CASE("variant counts match the brute-force union oracle") {
  std::mt19937 rng(32);
  for (int trial = 0; trial < 300; ++trial) {
    auto in = random_instance(rng, 20, 0.05, 0.4);
    double t1 = (rng() % 1000) / 1000.0, t2 = (rng() % 1000) / 1000.0;
    auto sim = [&](int a, int b) { return in.sim(a, b); };
    for (int v = 0; v < in.dg.n; ++v) {
      auto r = diversity_of(in.g, &in.table, NodeId{static_cast<std::uint32_t>(v)},
                            ThresholdPolicy::fixed(t1, t2));
      REQUIRE(as_ints(r) == oracle::variant_counts(in.dg, v, sim, t1, t2));
    }
  }
}

TEST_CASE("policy thresholds agree with oracle statistics") {
  std::mt19937 rng(33);
  for (int trial = 0; trial < 100; ++trial) {
    auto in = random_instance(rng, 15, 0.2, 0.5);
    for (int v = 0; v < in.dg.n; ++v) {
      auto refs = oracle::refs(in.dg, v);
      if (refs.size() < 2) continue;
      std::vector<double> to_target, pairs;
      for (std::size_t i = 0; i < refs.size(); ++i) {
        to_target.push_back(in.sim(v, refs[i]));
        for (std::size_t j = i + 1; j < refs.size(); ++j) pairs.push_back(in.sim(refs[i], refs[j]));
      }
      auto sims = ReferenceSimilarities::compute(in.g, in.table, NodeId{static_cast<std::uint32_t>(v)});
      auto d = resolve_thresholds(sims, ThresholdPolicy::dblp());
      CHECK(d.theta1 == Approx(oracle::mean(to_target)).margin(1e-12));
      CHECK(d.theta2 == Approx(oracle::iqr_mean(pairs)).margin(1e-12));
      auto p = resolve_thresholds(sims, ThresholdPolicy::pubmed());
      CHECK(p.theta1 == Approx(oracle::lower_quartile(to_target)).margin(1e-12));
      CHECK(p.theta2 == Approx(oracle::iqr_mean(to_target)).margin(1e-12));
    }
  }
}

TEST_CASE("monotonicity lattice and threshold monotonicity") {
  std::mt19937 rng(34);
  for (int trial = 0; trial < 100; ++trial) {
    auto in = random_instance(rng, 20, 0.05, 0.4);
    double t1 = (rng() % 1000) / 1000.0, t2 = (rng() % 1000) / 1000.0;
    double t1b = t1 + (rng() % 500) / 1000.0, t2b = t2 + (rng() % 500) / 1000.0;
    std::vector<NodeId> targets;
    for (std::uint32_t i = 0; i < in.g.node_count(); ++i) targets.push_back(NodeId{i});
    auto lo = compute_all(in.g, &in.table, targets, ThresholdPolicy::fixed(t1, t2), 2);
    auto hi = compute_all(in.g, &in.table, targets, ThresholdPolicy::fixed(t1b, t2b), 1);
    for (std::size_t i = 0; i < lo.size(); ++i) {
      auto s = as_ints(lo[i]);
      int k = static_cast<int>(lo[i].n_refs);
      for (int x : s) CHECK((k == 0 ? x == 0 : (1 <= x && x <= k)));
      CHECK(s[1] <= s[0]);
      CHECK(s[2] <= s[0]);
      CHECK(s[3] <= s[0]);
      CHECK(s[3] >= s[1]);
      CHECK(s[4] <= std::min(s[2], s[3]));
      CHECK(s[5] <= std::min(s[1], s[2]));
      auto h = as_ints(hi[i]);
      CHECK(h[2] >= s[2]);
      CHECK(h[3] >= s[3]);
    }
  }
}

TEST_CASE("vacuous theta2 without internal citations equals combined") {
  std::mt19937 rng(35);
  for (int trial = 0; trial < 100; ++trial) {
    auto in = random_instance(rng, 20, 0.05, 0.3);
    for (int v = 0; v < in.dg.n; ++v) {
      auto refs = oracle::refs(in.dg, v);
      if (!oracle::direct(in.dg, refs).empty()) continue;
      auto r = diversity_of(in.g, &in.table, NodeId{static_cast<std::uint32_t>(v)},
                            ThresholdPolicy::fixed(0.5, -1.0));
      CHECK(r.value(Variant::combined_enhanced) == r.value(Variant::combined));
    }
  }
}

TEST_CASE("relabelling nodes does not change any variant") {
  std::mt19937 rng(36);
  for (int trial = 0; trial < 50; ++trial) {
    auto in = random_instance(rng, 15, 0.1, 0.4);
    std::vector<int> perm(in.dg.n);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    oracle::Digraph pg(in.dg.n);
    std::vector<std::vector<float>> pv(in.dg.n);
    for (int a = 0; a < in.dg.n; ++a) {
      pv[perm[a]] = in.vecs[a];
      for (int b = 0; b < in.dg.n; ++b) pg.adj[perm[a]][perm[b]] = in.dg.adj[a][b];
    }
    auto g2 = build_graph(testing::corpus_of(pg));
    auto t2 = testing::table_of(pv);
    auto policy = ThresholdPolicy::dblp();
    for (int v = 0; v < in.dg.n; ++v) {
      auto a = diversity_of(in.g, &in.table, NodeId{static_cast<std::uint32_t>(v)}, policy);
      auto b = diversity_of(g2, &t2, NodeId{static_cast<std::uint32_t>(perm[v])}, policy);
      CHECK(a.sd == b.sd);
    }
  }
}

TEST_CASE("compute_all") {
  F1 f;
  CHECK_THROWS_AS(compute_all(f.g, &f.e.table, {}, ThresholdPolicy::dblp()), UsageError);
  std::vector<NodeId> all;
  for (std::uint32_t i = 0; i < f.g.node_count(); ++i) all.push_back(NodeId{i});
  auto serial = compute_all(f.g, &f.e.table, all, ThresholdPolicy::dblp(), 1);
  auto parallel = compute_all(f.g, &f.e.table, all, ThresholdPolicy::dblp(), 4);
  CHECK(diversity_csv(f.g, serial) == diversity_csv(f.g, parallel));
  for (std::size_t i = 0; i < all.size(); ++i) CHECK(serial[i].target == all[i]);

  std::vector<NodeId> one{f.n("1")};
  auto golden = compute_all(f.g, &f.e.table, one, ThresholdPolicy::fixed(0.85, 0.7));
  CHECK(diversity_csv(f.g, golden) ==
        "target_id,n_refs,sd_r,sd_c,sd_ss,sd_cs,sd_scs,sd_css,theta1,theta2\n"
        "1,5,4,2,3,3,2,1,0.85,0.7\n");
}

TEST_CASE("diversity csv round trip") {
  F1 f;
  std::vector<NodeId> all;
  for (std::uint32_t i = 0; i < f.g.node_count(); ++i) all.push_back(NodeId{i});
  auto results = compute_all(f.g, nullptr, all, ThresholdPolicy::dblp());
  auto text = diversity_csv(f.g, results);
  auto back = parse_diversity_csv(text, f.g);
  REQUIRE(back.size() == results.size());
  CHECK(diversity_csv(f.g, back) == text);
  CHECK(!back[0].value(Variant::semantic_enhanced));
  CHECK_THROWS_AS(parse_diversity_csv("nope\n", f.g), DataError);
}
