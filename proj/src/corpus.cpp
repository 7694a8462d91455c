#include "csd/corpus.hpp"

#include <algorithm>
#include <charconv>
#include <map>

#include <fmt/format.h>
#include <json.hpp>

#include "csd/error.hpp"
#include "csd/graph.hpp"
#include "csd/io.hpp"
#include "csd/parallel.hpp"

namespace csd {

using nlohmann::json;

namespace {

constexpr std::string_view kRankNames[] = {"Q1", "Q2", "Q3", "Q4", "A", "B", "C", "Unranked"};

struct IdLess {
  using is_transparent = void;
  bool operator()(const PaperRecord& a, std::string_view b) const { return a.id < b; }
  bool operator()(std::string_view a, const PaperRecord& b) const { return a < b.id; }
};

// A record plus where it came from, for duplicate-id diagnostics.
struct Located {
  PaperRecord record;
  std::size_t offset;
};

struct ChunkResult {
  std::vector<Located> records;
  IngestStats stats;
};

void normalize_references(PaperRecord& r, IngestStats& stats) {
  auto& refs = r.references;
  auto self = std::remove(refs.begin(), refs.end(), r.id);
  stats.self_references_dropped += static_cast<std::size_t>(refs.end() - self);
  refs.erase(self, refs.end());
  std::sort(refs.begin(), refs.end());
  auto dup = std::unique(refs.begin(), refs.end());
  stats.duplicate_references_dropped += static_cast<std::size_t>(refs.end() - dup);
  refs.erase(dup, refs.end());
  if (r.topics) {
    std::sort(r.topics->begin(), r.topics->end());
    r.topics->erase(std::unique(r.topics->begin(), r.topics->end()), r.topics->end());
  }
}

// Field readers return false when the field is present with the wrong type.

bool read_string(const json& obj, const char* key, std::string& out) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return true;
  if (!it->is_string()) return false;
  out = it->get<std::string>();
  return true;
}

// Accepts strings and integers; PubMed ids are frequently numeric.
bool read_id_like(const json& value, std::string& out) {
  if (value.is_string()) {
    out = value.get<std::string>();
    return true;
  }
  if (value.is_number_integer()) {
    out = std::to_string(value.get<long long>());
    return true;
  }
  return false;
}

bool read_year(const json& obj, const char* key, std::optional<int>& out, bool allow_text) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return true;
  if (it->is_number_integer()) {
    out = it->get<int>();
    return true;
  }
  if (allow_text && it->is_string()) {
    auto s = it->get<std::string>();
    int y = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), y);
    if (ec != std::errc{} || s.empty()) return false;
    out = y;
    return true;
  }
  return false;
}

bool read_id_array(const json& obj, const char* key, std::vector<std::string>& out) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return true;
  if (!it->is_array()) return false;
  out.reserve(it->size());
  for (const auto& v : *it) {
    std::string s;
    if (!read_id_like(v, s)) return false;
    out.push_back(std::move(s));
  }
  return true;
}

bool read_topics(const json& obj, const char* key, std::optional<std::vector<std::string>>& out) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return true;
  if (!it->is_array()) return false;
  std::vector<std::string> topics;
  for (const auto& v : *it) {
    if (v.is_string()) {
      topics.push_back(v.get<std::string>());
    } else if (v.is_object() && v.contains("name") && v["name"].is_string()) {
      topics.push_back(v["name"].get<std::string>());  // {"name": ..., "w": ...} style
    } else {
      return false;
    }
  }
  out = std::move(topics);
  return true;
}

bool read_rank(const json& obj, PaperRecord& r) {
  auto it = obj.find("rank");
  if (it == obj.end() || it->is_null()) return true;
  if (!it->is_string()) return false;
  r.rank = parse_venue_rank(it->get<std::string>());
  return true;
}

const char* first_present(const json& obj, std::initializer_list<const char*> keys) {
  for (const char* k : keys) {
    if (obj.contains(k)) return k;
  }
  return *keys.begin();
}

std::optional<PaperRecord> from_canonical(const json& obj) {
  if (!obj.is_object()) return std::nullopt;
  PaperRecord r;
  auto id = obj.find("id");
  if (id == obj.end() || !id->is_string()) return std::nullopt;
  r.id = id->get<std::string>();
  if (r.id.empty()) return std::nullopt;
  if (!read_string(obj, "title", r.title) || !read_string(obj, "abstract", r.abstract) ||
      !read_year(obj, "year", r.year, false) || !read_string(obj, "venue", r.venue) ||
      !read_rank(obj, r) || !read_id_array(obj, "references", r.references) ||
      !read_topics(obj, "topics", r.topics)) {
    return std::nullopt;
  }
  return r;
}

// DBLP-Citation-network V13 (AMiner): "_id", venue as an object with "raw",
// fields of study under "fos".
std::optional<PaperRecord> from_dblp(const json& obj) {
  if (!obj.is_object()) return std::nullopt;
  PaperRecord r;
  auto id = obj.find(obj.contains("_id") ? "_id" : "id");
  if (id == obj.end() || !read_id_like(*id, r.id) || r.id.empty()) return std::nullopt;
  if (!read_string(obj, "title", r.title) || !read_string(obj, "abstract", r.abstract) ||
      !read_year(obj, "year", r.year, true) || !read_rank(obj, r) ||
      !read_id_array(obj, "references", r.references) ||
      !read_topics(obj, first_present(obj, {"fos", "keywords", "topics"}), r.topics)) {
    return std::nullopt;
  }
  if (auto v = obj.find("venue"); v != obj.end() && !v->is_null()) {
    if (v->is_string()) {
      r.venue = v->get<std::string>();
    } else if (v->is_object()) {
      if (!read_string(*v, v->contains("raw") ? "raw" : "name", r.venue)) return std::nullopt;
    } else {
      return std::nullopt;
    }
  }
  return r;
}

// PubMed export: "pmid", "journal", "pub_year", MeSH terms as topics.
std::optional<PaperRecord> from_pubmed(const json& obj) {
  if (!obj.is_object()) return std::nullopt;
  PaperRecord r;
  auto id = obj.find(obj.contains("pmid") ? "pmid" : "id");
  if (id == obj.end() || !read_id_like(*id, r.id) || r.id.empty()) return std::nullopt;
  if (!read_string(obj, "title", r.title) || !read_string(obj, "abstract", r.abstract) ||
      !read_year(obj, first_present(obj, {"pub_year", "year"}), r.year, true) ||
      !read_string(obj, first_present(obj, {"journal", "venue"}), r.venue) ||
      !read_rank(obj, r) ||
      !read_id_array(obj, first_present(obj, {"references", "cited_pmids"}), r.references) ||
      !read_topics(obj, first_present(obj, {"mesh_terms", "mesh", "topics"}), r.topics)) {
    return std::nullopt;
  }
  return r;
}

using RecordReader = std::optional<PaperRecord> (*)(const json&);

RecordReader reader_for(CorpusFormat format) {
  switch (format) {
    case CorpusFormat::canonical: return from_canonical;
    case CorpusFormat::dblp_v13: return from_dblp;
    case CorpusFormat::pubmed: return from_pubmed;
  }
  return from_canonical;
}

void accept(std::optional<PaperRecord> rec, std::size_t offset, ChunkResult& out) {
  if (!rec) {
    ++out.stats.malformed;
    return;
  }
  normalize_references(*rec, out.stats);
  ++out.stats.parsed;
  out.records.push_back({std::move(*rec), offset});
}

// One JSON object per line; blank lines and '#' comment lines are skipped.
std::vector<ChunkResult> parse_lines(std::string_view text, RecordReader reader, unsigned threads) {
  threads = resolve_threads(threads);
  std::vector<std::size_t> starts{0};
  if (threads > 1 && text.size() > (1u << 20)) {
    for (unsigned t = 1; t < threads; ++t) {
      std::size_t pos = text.size() * t / threads;
      pos = text.find('\n', std::max(pos, starts.back()));
      if (pos == std::string_view::npos) break;
      if (pos + 1 > starts.back()) starts.push_back(pos + 1);
    }
  }
  starts.push_back(text.size());
  std::size_t chunks = starts.size() - 1;

  std::vector<std::size_t> first_line(chunks, 0);
  for (std::size_t c = 1; c < chunks; ++c) {
    auto prev = text.substr(starts[c - 1], starts[c] - starts[c - 1]);
    first_line[c] = first_line[c - 1] + static_cast<std::size_t>(std::count(prev.begin(), prev.end(), '\n'));
  }

  std::vector<ChunkResult> results(chunks);
  parallel_for(chunks, threads, [&](std::size_t c) {
    auto slice = text.substr(starts[c], starts[c + 1] - starts[c]);
    io::for_each_line(slice, [&](std::string_view line, std::size_t n) {
      auto body = io::trim(line);
      if (body.empty() || body.front() == '#') return;
      auto obj = json::parse(body, nullptr, false);
      if (obj.is_discarded()) {
        ++results[c].stats.malformed;
        return;
      }
      accept(reader(obj), first_line[c] + n, results[c]);
    });
  });
  return results;
}

// Mongo shell exports wrap integers as NumberInt(…)/NumberLong(…); unwrap
// them outside string literals so the text becomes plain JSON.
std::string unwrap_number_wrappers(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  bool in_string = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (in_string) {
      out += c;
      if (c == '\\' && i + 1 < text.size()) {
        out += text[++i];
      } else if (c == '"') {
        in_string = false;
      }
      continue;
    }
    if (c == '"') {
      in_string = true;
      out += c;
      continue;
    }
    bool wrapped = false;
    for (std::string_view w : {std::string_view("NumberInt("), std::string_view("NumberLong(")}) {
      if (text.compare(i, w.size(), w) == 0) {
        auto close = text.find(')', i + w.size());
        if (close == std::string_view::npos) break;
        auto inner = text.substr(i + w.size(), close - i - w.size());
        if (inner.size() >= 2 && inner.front() == '"' && inner.back() == '"') {
          inner = inner.substr(1, inner.size() - 2);
        }
        out += inner;
        i = close;
        wrapped = true;
        break;
      }
    }
    if (!wrapped) out += c;
  }
  return out;
}

// Top-level JSON array; each element is handed over and discarded as soon as
// it closes, so the DOM never holds more than one record.
ChunkResult parse_array(std::string_view text, RecordReader reader) {
  ChunkResult out;
  std::size_t ordinal = 0;
  json::parser_callback_t cb = [&](int depth, json::parse_event_t event, json& parsed) {
    if (depth == 1 && event == json::parse_event_t::object_end) {
      accept(reader(parsed), ++ordinal, out);
      return false;
    }
    return true;
  };
  try {
    json discarded = json::parse(text, cb);
    static_cast<void>(discarded);
  } catch (const json::parse_error& e) {
    throw DataError(fmt::format("corpus is not valid JSON: {}", e.what()));
  }
  return out;
}

}  // namespace

std::string_view to_string(VenueRank rank) { return kRankNames[static_cast<int>(rank)]; }

VenueRank parse_venue_rank(std::string_view text) {
  text = io::trim(text);
  for (int i = 0; i < 7; ++i) {
    if (text == kRankNames[i]) return static_cast<VenueRank>(i);
  }
  return VenueRank::Unranked;
}

std::string_view to_string(CorpusFormat format) {
  switch (format) {
    case CorpusFormat::canonical: return "canonical";
    case CorpusFormat::dblp_v13: return "dblp_v13";
    case CorpusFormat::pubmed: return "pubmed";
  }
  return "canonical";
}

std::optional<CorpusFormat> parse_corpus_format(std::string_view text) {
  for (auto f : {CorpusFormat::canonical, CorpusFormat::dblp_v13, CorpusFormat::pubmed}) {
    if (text == to_string(f)) return f;
  }
  return std::nullopt;
}

Corpus::Corpus(std::vector<PaperRecord> records, Provenance provenance)
    : records_(std::move(records)), provenance_(std::move(provenance)) {
  std::sort(records_.begin(), records_.end(),
            [](const PaperRecord& a, const PaperRecord& b) { return a.id < b.id; });
  for (std::size_t i = 0; i < records_.size(); ++i) {
    if (records_[i].id.empty()) throw DataError("record with empty id");
    if (i > 0 && records_[i].id == records_[i - 1].id) {
      throw DataError(fmt::format("duplicate id '{}'", records_[i].id));
    }
  }
}

const PaperRecord* Corpus::find(std::string_view id) const {
  auto it = std::lower_bound(records_.begin(), records_.end(), id, IdLess{});
  return it != records_.end() && it->id == id ? &*it : nullptr;
}

std::optional<std::size_t> Corpus::index_of(std::string_view id) const {
  const auto* rec = find(id);
  if (!rec) return std::nullopt;
  return static_cast<std::size_t>(rec - records_.data());
}

std::size_t Corpus::dangling_reference_count() const {
  std::size_t n = 0;
  for (const auto& r : records_) {
    for (const auto& ref : r.references) n += contains(ref) ? 0 : 1;
  }
  return n;
}

Corpus parse_corpus_text(std::string_view text, CorpusFormat format, std::string source,
                         const ParseOptions& options) {
  auto reader = reader_for(format);
  std::vector<ChunkResult> chunks;
  std::string unwrapped;
  if (format == CorpusFormat::dblp_v13) {
    unwrapped = unwrap_number_wrappers(text);
    auto body = io::trim(unwrapped);
    if (!body.empty() && body.front() == '[') {
      chunks.push_back(parse_array(body, reader));
    } else {
      chunks = parse_lines(unwrapped, reader, options.threads);
    }
  } else {
    chunks = parse_lines(text, reader, options.threads);
  }

  Provenance prov{std::move(source), format, {}, std::nullopt};
  std::vector<Located> located;
  for (auto& c : chunks) {
    prov.ingest.parsed += c.stats.parsed;
    prov.ingest.malformed += c.stats.malformed;
    prov.ingest.self_references_dropped += c.stats.self_references_dropped;
    prov.ingest.duplicate_references_dropped += c.stats.duplicate_references_dropped;
    if (located.empty()) {
      located = std::move(c.records);
    } else {
      std::move(c.records.begin(), c.records.end(), std::back_inserter(located));
    }
  }
  if (located.empty()) {
    throw DataError(fmt::format("{}: no parseable records ({} malformed)", prov.source,
                                prov.ingest.malformed));
  }

  std::sort(located.begin(), located.end(), [](const Located& a, const Located& b) {
    return a.record.id != b.record.id ? a.record.id < b.record.id : a.offset < b.offset;
  });
  const char* unit = format == CorpusFormat::dblp_v13 && !unwrapped.empty() &&
                             io::trim(unwrapped).front() == '['
                         ? "entry"
                         : "line";
  for (std::size_t i = 1; i < located.size(); ++i) {
    if (located[i].record.id == located[i - 1].record.id) {
      throw DataError(fmt::format("{}: duplicate id '{}' at {} {} and {} {}", prov.source,
                                  located[i].record.id, unit, located[i - 1].offset, unit,
                                  located[i].offset));
    }
  }
  std::vector<PaperRecord> records;
  records.reserve(located.size());
  for (auto& l : located) records.push_back(std::move(l.record));
  return Corpus(std::move(records), std::move(prov));
}

Corpus parse_corpus(const std::filesystem::path& path, CorpusFormat format,
                    const ParseOptions& options) {
  auto text = io::read_file(path);
  return parse_corpus_text(text, format, path.string(), options);
}

std::string to_canonical_line(const PaperRecord& r) {
  nlohmann::ordered_json j;
  j["id"] = r.id;
  j["title"] = r.title;
  j["abstract"] = r.abstract;
  if (r.year) j["year"] = *r.year;
  j["venue"] = r.venue;
  j["rank"] = std::string(to_string(r.rank));
  j["references"] = r.references;
  if (r.topics) j["topics"] = *r.topics;
  return j.dump(-1, ' ', false, json::error_handler_t::replace);
}

std::string serialize_canonical(const Corpus& corpus) {
  std::string out;
  for (const auto& r : corpus.records()) {
    out += to_canonical_line(r);
    out += '\n';
  }
  return out;
}

void write_canonical(const Corpus& corpus, const std::filesystem::path& path) {
  io::write_file_atomic(path, serialize_canonical(corpus));
}

CleanResult clean(const Corpus& corpus, const CleanPolicy& policy) {
  CleanReport report;
  std::vector<PaperRecord> current(corpus.records().begin(), corpus.records().end());
  for (bool changed = true; changed;) {
    changed = false;
    ++report.rounds;
    std::vector<PaperRecord> kept;
    kept.reserve(current.size());
    for (auto& r : current) {
      if (policy.require_title && io::trim(r.title).empty()) {
        ++report.removed_missing_title;
      } else if (policy.require_abstract && io::trim(r.abstract).empty()) {
        ++report.removed_missing_abstract;
      } else if (r.references.size() < policy.min_references) {
        ++report.removed_few_references;
      } else {
        kept.push_back(std::move(r));
        continue;
      }
      changed = true;
    }
    if (policy.drop_dangling_refs) {
      // `kept` stays id-sorted, so resolution is a binary search.
      auto resolves = [&](const std::string& id) {
        return std::binary_search(kept.begin(), kept.end(), std::string_view(id), IdLess{});
      };
      for (auto& r : kept) {
        auto before = r.references.size();
        std::erase_if(r.references, [&](const std::string& ref) { return !resolves(ref); });
        if (r.references.size() != before) {
          report.dangling_references_dropped += before - r.references.size();
          changed = true;
        }
      }
    }
    current = std::move(kept);
  }
  if (current.empty()) throw DataError("cleaning policy removed every record");
  Provenance prov = corpus.provenance();
  prov.cleaning = policy;
  return {Corpus(std::move(current), std::move(prov)), report};
}

Corpus largest_weak_component(const Corpus& corpus) {
  if (corpus.empty()) throw UsageError("largest_weak_component: empty corpus");
  auto g = build_graph(corpus);
  auto labels = weak_components(g);
  std::vector<std::size_t> sizes(labels.size(), 0);
  for (auto l : labels) ++sizes[l.value];
  // Labels are smallest member ids, so scanning upward with a strict '>'
  // keeps the lexicographically smallest component among equals.
  std::size_t best = 0;
  for (std::size_t i = 1; i < sizes.size(); ++i) {
    if (sizes[i] > sizes[best]) best = i;
  }
  std::vector<PaperRecord> members;
  members.reserve(sizes[best]);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i].value == best) members.push_back(corpus.records()[i]);
  }
  return Corpus(std::move(members), corpus.provenance());
}

std::vector<std::string> select_group(const Corpus& corpus, const GroupSpec& spec) {
  if (!spec.any()) throw UsageError("select_group: group spec sets no field");
  std::vector<std::string> ids;
  for (const auto& r : corpus.records()) {
    if (spec.year && r.year != spec.year) continue;
    if (spec.venue && r.venue != *spec.venue) continue;
    if (spec.rank && r.rank != *spec.rank) continue;
    ids.push_back(r.id);
  }
  return ids;
}

}  // namespace csd
