#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace csd {

/// Journal (JCR quartile) or conference (CCF class) label. Ranks are input
/// labels only; anything unrecognised becomes Unranked.
enum class VenueRank { Q1, Q2, Q3, Q4, A, B, C, Unranked };

std::string_view to_string(VenueRank rank);
VenueRank parse_venue_rank(std::string_view text);

struct PaperRecord {
  std::string id;
  std::string title;
  std::string abstract;
  std::optional<int> year;
  std::string venue;
  VenueRank rank = VenueRank::Unranked;
  /// Sorted, unique, never the record's own id.
  std::vector<std::string> references;
  /// Absent when the source carries no topic information at all.
  std::optional<std::vector<std::string>> topics;

  std::size_t n_topics() const { return topics ? topics->size() : 0; }
};

enum class CorpusFormat { canonical, dblp_v13, pubmed };

std::string_view to_string(CorpusFormat format);
std::optional<CorpusFormat> parse_corpus_format(std::string_view text);

struct IngestStats {
  std::size_t parsed = 0;
  std::size_t malformed = 0;
  std::size_t self_references_dropped = 0;
  std::size_t duplicate_references_dropped = 0;
};

struct CleanPolicy {
  bool require_title = false;
  bool require_abstract = false;
  std::size_t min_references = 0;
  bool drop_dangling_refs = false;

  bool operator==(const CleanPolicy&) const = default;
};

struct Provenance {
  std::string source;
  CorpusFormat format = CorpusFormat::canonical;
  IngestStats ingest;
  std::optional<CleanPolicy> cleaning;
};

/// Immutable id-sorted record collection. Lookups are binary searches over
/// the sorted ids, so record order doubles as the graph's node order.
class Corpus {
 public:
  Corpus() = default;
  /// Sorts by id. Throws DataError on an empty or duplicated id.
  explicit Corpus(std::vector<PaperRecord> records, Provenance provenance = {});

  std::span<const PaperRecord> records() const { return records_; }
  std::size_t size() const { return records_.size(); }
  bool empty() const { return records_.empty(); }

  const PaperRecord* find(std::string_view id) const;
  bool contains(std::string_view id) const { return find(id) != nullptr; }
  /// Index of `id` in records(), if present.
  std::optional<std::size_t> index_of(std::string_view id) const;

  /// Reference entries (summed over records) that do not resolve in-corpus.
  std::size_t dangling_reference_count() const;

  const Provenance& provenance() const { return provenance_; }

 private:
  std::vector<PaperRecord> records_;
  Provenance provenance_;
};

struct ParseOptions {
  /// Worker threads for line-oriented formats; 0 picks hardware concurrency.
  unsigned threads = 1;
};

/// Reads a corpus file. Malformed entries are counted and skipped; a file
/// with no parseable entries, an unreadable file or a duplicated id throws
/// DataError.
Corpus parse_corpus(const std::filesystem::path& path, CorpusFormat format,
                    const ParseOptions& options = {});
Corpus parse_corpus_text(std::string_view text, CorpusFormat format,
                         std::string source = "<memory>", const ParseOptions& options = {});

std::string to_canonical_line(const PaperRecord& record);
/// Canonical JSON Lines, one record per line in id order.
std::string serialize_canonical(const Corpus& corpus);
void write_canonical(const Corpus& corpus, const std::filesystem::path& path);

struct CleanReport {
  std::size_t removed_missing_title = 0;
  std::size_t removed_missing_abstract = 0;
  std::size_t removed_few_references = 0;
  std::size_t dangling_references_dropped = 0;
  std::size_t rounds = 0;
};

struct CleanResult {
  Corpus corpus;
  CleanReport report;
};

/// Applies the enabled predicates until a fixed point, so the result is
/// stable under a second application. Throws DataError if nothing survives.
CleanResult clean(const Corpus& corpus, const CleanPolicy& policy);

/// Records of the largest weakly connected component of the citation
/// digraph; equal-size ties go to the component holding the smallest id.
Corpus largest_weak_component(const Corpus& corpus);

struct GroupSpec {
  std::optional<int> year;
  std::optional<std::string> venue;
  std::optional<VenueRank> rank;

  bool any() const { return year || venue || rank; }
};

/// Sorted ids of records matching every set field. Throws UsageError when no
/// field is set.
std::vector<std::string> select_group(const Corpus& corpus, const GroupSpec& spec);

}  // namespace csd
