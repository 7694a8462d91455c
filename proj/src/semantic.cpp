#include "csd/semantic.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>
#include <json.hpp>

#include "csd/error.hpp"
#include "csd/io.hpp"

namespace csd {

void EmbeddingTable::add(std::string id, std::span<const float> vector) {
  if (vector.size() != dim_) {
    throw DataError(fmt::format("embedding '{}' has dimension {}, expected {}", id, vector.size(), dim_));
  }
  if (index_.contains(id)) throw DataError(fmt::format("embedding '{}' listed twice", id));
  index_.emplace(id, ids_.size());
  ids_.push_back(std::move(id));
  data_.insert(data_.end(), vector.begin(), vector.end());
}

std::optional<std::span<const float>> EmbeddingTable::vector(std::string_view id) const {
  auto it = index_.find(id);
  if (it == index_.end()) return std::nullopt;
  return std::span(data_).subspan(it->second * dim_, dim_);
}

LoadedEmbeddings parse_embeddings(std::string_view text, const Corpus* corpus) {
  std::optional<EmbeddingTable> table;
  std::vector<float> buf;
  io::for_each_line(text, [&](std::string_view line, std::size_t n) {
    auto body = io::trim(line);
    if (body.empty() || body.front() == '#') return;
    auto obj = nlohmann::json::parse(body, nullptr, false);
    if (obj.is_discarded() || !obj.is_object() || !obj.contains("id") || !obj["id"].is_string() ||
        !obj.contains("vector") || !obj["vector"].is_array()) {
      throw DataError(fmt::format("embeddings line {}: expected {{\"id\": str, \"vector\": [float]}}", n));
    }
    buf.clear();
    for (const auto& x : obj["vector"]) {
      if (!x.is_number()) throw DataError(fmt::format("embeddings line {}: non-numeric component", n));
      buf.push_back(x.get<float>());
    }
    auto id = obj["id"].get<std::string>();
    if (!table) {
      if (buf.empty()) throw DataError(fmt::format("embeddings line {}: empty vector", n));
      table.emplace(buf.size());
    }
    table->add(std::move(id), buf);
  });
  if (!table) throw DataError("embedding file contains no vectors");

  LoadedEmbeddings out{std::move(*table), {}};
  if (corpus) {
    for (const auto& r : corpus->records()) {
      if (!out.table.vector(r.id)) out.coverage.missing.push_back(r.id);
    }
    for (const auto& id : out.table.ids()) {
      if (!corpus->contains(id)) out.coverage.unresolved.push_back(id);
    }
    std::sort(out.coverage.unresolved.begin(), out.coverage.unresolved.end());
  }
  return out;
}

LoadedEmbeddings load_embeddings(const std::filesystem::path& path, const Corpus* corpus) {
  try {
    return parse_embeddings(io::read_file(path), corpus);
  } catch (const DataError& e) {
    throw DataError(fmt::format("{}: {}", path.string(), e.what()));
  }
}

double cosine(std::span<const float> a, std::span<const float> b) {
  if (a.size() != b.size()) {
    throw UsageError(fmt::format("cosine: dimension mismatch ({} vs {})", a.size(), b.size()));
  }
  double dot = 0, na = 0, nb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    double x = a[i], y = b[i];
    dot += x * y;
    na += x * x;
    nb += y * y;
  }
  if (na == 0 || nb == 0) return 0.0;
  return std::clamp(dot / (std::sqrt(na) * std::sqrt(nb)), -1.0, 1.0);
}

TargetSimilarities target_similarities(const EmbeddingTable& table, std::string_view target,
                                       std::span<const std::string> refs) {
  auto tv = table.vector(target);
  if (!tv) throw DataError(fmt::format("no embedding for target '{}'", target));
  TargetSimilarities out;
  for (const auto& r : refs) {
    if (auto rv = table.vector(r)) {
      out.values.emplace_back(r, cosine(*tv, *rv));
    } else {
      out.missing.push_back(r);
    }
  }
  return out;
}

PairwiseSimilarities pairwise_similarities(const EmbeddingTable& table,
                                           std::span<const std::string> refs) {
  PairwiseSimilarities out;
  std::vector<std::string> ids;
  std::vector<std::span<const float>> vecs;
  for (const auto& r : refs) {
    if (auto v = table.vector(r)) {
      ids.push_back(r);
      vecs.push_back(*v);
    } else {
      out.missing.push_back(r);
    }
  }
  const std::size_t k = ids.size();
  std::vector<double> values(k * k, 0.0);
  for (std::size_t i = 0; i < k; ++i) {
    values[i * k + i] = cosine(vecs[i], vecs[i]);
    for (std::size_t j = i + 1; j < k; ++j) {
      values[i * k + j] = values[j * k + i] = cosine(vecs[i], vecs[j]);
    }
  }
  out.matrix = SimilarityMatrix(std::move(ids), std::move(values));
  return out;
}

}  // namespace csd
