#pragma once

#include <unistd.h>

#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "csd/corpus.hpp"
#include "csd/graph.hpp"
#include "csd/io.hpp"
#include "csd/semantic.hpp"
#include "oracles.hpp"

namespace testing {

inline std::filesystem::path fixture(const std::string& name) {
  return std::filesystem::path(CSD_FIXTURES) / name;
}

// Zero-padded so that lexicographic id order matches node index order.
inline std::string node_name(int i) { return fmt::format("p{:04d}", i); }

inline csd::Corpus corpus_of(const oracle::Digraph& g, const std::vector<int>& years = {}) {
  std::vector<csd::PaperRecord> recs;
  for (int a = 0; a < g.n; ++a) {
    csd::PaperRecord r;
    r.id = node_name(a);
    r.title = "t" + r.id;
    if (!years.empty()) r.year = years[a];
    for (int b = 0; b < g.n; ++b) {
      if (g.cites(a, b)) r.references.push_back(node_name(b));
    }
    recs.push_back(std::move(r));
  }
  return csd::Corpus(std::move(recs));
}

inline oracle::Digraph random_digraph(std::mt19937& rng, int n, double p) {
  oracle::Digraph g(n);
  std::bernoulli_distribution edge(p);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (a != b && edge(rng)) g.adj[a][b] = true;
  return g;
}

inline std::vector<std::vector<float>> random_vectors(std::mt19937& rng, int n, int dim) {
  std::normal_distribution<float> z(0.0f, 1.0f);
  std::vector<std::vector<float>> out(n, std::vector<float>(dim));
  for (auto& v : out)
    for (auto& x : v) x = z(rng);
  return out;
}

inline csd::EmbeddingTable table_of(const std::vector<std::vector<float>>& vecs) {
  csd::EmbeddingTable t(vecs.front().size());
  for (std::size_t i = 0; i < vecs.size(); ++i) t.add(node_name(static_cast<int>(i)), vecs[i]);
  return t;
}

// A fresh scratch directory under the system temp dir.
inline std::filesystem::path scratch(const std::string& tag) {
  auto p = std::filesystem::temp_directory_path() / fmt::format("csd_{}_{}", tag, ::getpid());
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

}  // namespace testing
