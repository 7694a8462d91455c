#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "csd/corpus.hpp"

namespace csd {

/// Dense float32 vectors keyed by paper id, stored row-major in one block.
class EmbeddingTable {
 public:
  explicit EmbeddingTable(std::size_t dim = 0) : dim_(dim) {}

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return ids_.size(); }
  bool empty() const { return ids_.empty(); }
  std::span<const std::string> ids() const { return ids_; }

  /// Throws DataError on a dimension mismatch or a repeated id.
  void add(std::string id, std::span<const float> vector);
  std::optional<std::span<const float>> vector(std::string_view id) const;

 private:
  struct Hash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const { return std::hash<std::string_view>{}(s); }
  };

  std::size_t dim_;
  std::vector<std::string> ids_;
  std::unordered_map<std::string, std::size_t, Hash, std::equal_to<>> index_;
  std::vector<float> data_;
};

struct CoverageReport {
  /// Corpus ids with no vector.
  std::vector<std::string> missing;
  /// Vector ids that do not resolve in the corpus.
  std::vector<std::string> unresolved;
};

struct LoadedEmbeddings {
  EmbeddingTable table;
  CoverageReport coverage;
};

/// Reads `{"id": str, "vector": [float...]}` JSON Lines ('#' lines are
/// comments). Coverage is computed against `corpus` when given.
LoadedEmbeddings load_embeddings(const std::filesystem::path& path, const Corpus* corpus = nullptr);
LoadedEmbeddings parse_embeddings(std::string_view text, const Corpus* corpus = nullptr);

/// Cosine similarity accumulated in double precision; 0 when either vector
/// has zero norm. Throws UsageError on a length mismatch.
double cosine(std::span<const float> a, std::span<const float> b);

struct TargetSimilarities {
  std::vector<std::pair<std::string, double>> values;  // in `refs` order
  std::vector<std::string> missing;
};

/// Throws DataError when the target itself has no vector.
TargetSimilarities target_similarities(const EmbeddingTable& table, std::string_view target,
                                       std::span<const std::string> refs);

/// Symmetric cosine matrix over the ids that have vectors. The upper
/// triangle is computed and mirrored, so (i, j) and (j, i) are bit-identical.
class SimilarityMatrix {
 public:
  SimilarityMatrix() = default;
  SimilarityMatrix(std::vector<std::string> ids, std::vector<double> values)
      : ids_(std::move(ids)), values_(std::move(values)) {}

  std::size_t size() const { return ids_.size(); }
  std::span<const std::string> ids() const { return ids_; }
  double operator()(std::size_t i, std::size_t j) const { return values_[i * ids_.size() + j]; }

 private:
  std::vector<std::string> ids_;
  std::vector<double> values_;
};

struct PairwiseSimilarities {
  SimilarityMatrix matrix;
  std::vector<std::string> missing;
};

PairwiseSimilarities pairwise_similarities(const EmbeddingTable& table,
                                           std::span<const std::string> refs);

}  // namespace csd
