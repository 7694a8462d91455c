#include "csd/diversity.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "csd/error.hpp"
#include "csd/io.hpp"
#include "csd/parallel.hpp"
#include "csd/stats.hpp"
#include "csd/union_find.hpp"

namespace csd {

namespace {

constexpr double kUnknown = std::numeric_limits<double>::quiet_NaN();

constexpr std::string_view kNames[] = {
    "plain", "combined", "semantic_enhanced", "combined_enhanced",
    "semantic_combined_enhanced", "combined_semantic_enhanced",
};
constexpr std::string_view kColumns[] = {"sd_r", "sd_c", "sd_ss", "sd_cs", "sd_scs", "sd_css"};

// Pair of positions in the sorted reference list, i < j.
struct LocalPair {
  std::uint32_t i;
  std::uint32_t j;
  friend constexpr auto operator<=>(const LocalPair&, const LocalPair&) = default;
};

using PairList = std::vector<LocalPair>;

bool sorted_intersect(std::span<const NodeId> a, std::span<const NodeId> b, NodeId skip) {
  auto x = a.begin();
  auto y = b.begin();
  while (x != a.end() && y != b.end()) {
    if (*x < *y) {
      ++x;
    } else if (*y < *x) {
      ++y;
    } else {
      if (*x != skip) return true;
      ++x;
      ++y;
    }
  }
  return false;
}

// Everything about one target's reference set that does not depend on
// similarities: R_v itself, its internal citations, E1 and E2.
struct ReferenceStructure {
  NodeId target;
  std::span<const NodeId> refs;
  PairList direct;
  PairList co_citation;
  PairList coupling;

  ReferenceStructure(const CitationGraph& g, NodeId v) : target(v), refs(g.references(v)) {
    const auto k = static_cast<std::uint32_t>(refs.size());
    for (std::uint32_t i = 0; i < k; ++i) {
      auto out = g.references(refs[i]);
      auto in = g.citers(refs[i]);
      for (std::uint32_t j = i + 1; j < k; ++j) {
        if (std::binary_search(out.begin(), out.end(), refs[j]) || g.has_edge(refs[j], refs[i])) {
          direct.push_back({i, j});
        }
        // NodeId{UINT32_MAX} never occurs, so coupling has no exclusion.
        if (sorted_intersect(out, g.references(refs[j]), NodeId{UINT32_MAX})) {
          coupling.push_back({i, j});
        }
        if (sorted_intersect(in, g.citers(refs[j]), v)) co_citation.push_back({i, j});
      }
    }
  }

  bool linked(LocalPair p) const { return std::binary_search(direct.begin(), direct.end(), p); }

  std::vector<UndirectedEdge> to_edges(const PairList& pairs) const {
    std::vector<UndirectedEdge> out;
    out.reserve(pairs.size());
    for (auto p : pairs) out.push_back(UndirectedEdge::of(refs[p.i], refs[p.j]));
    std::sort(out.begin(), out.end());
    return out;
  }
};

PairList similar_unlinked(const ReferenceStructure& s, const ReferenceSimilarities& sims,
                          double theta1) {
  PairList out;
  const auto k = static_cast<std::uint32_t>(s.refs.size());
  for (std::uint32_t i = 0; i < k; ++i) {
    for (std::uint32_t j = i + 1; j < k; ++j) {
      auto sim = sims.between(i, j);
      if (sim && *sim >= theta1 && !s.linked({i, j})) out.push_back({i, j});
    }
  }
  return out;
}

PairList filter_by_similarity(const ReferenceStructure& s, const PairList& candidates,
                              const ReferenceSimilarities& sims, double theta2) {
  PairList out;
  for (auto p : candidates) {
    auto sim = sims.between(p.i, p.j);
    if (sim && *sim >= theta2 && !s.linked(p)) out.push_back(p);
  }
  return out;
}

struct VariantCount {
  std::size_t components;
  std::size_t edges;
};

VariantCount count(std::size_t k, std::initializer_list<const PairList*> sets) {
  PairList all;
  for (const auto* s : sets) all.insert(all.end(), s->begin(), s->end());
  std::sort(all.begin(), all.end());
  all.erase(std::unique(all.begin(), all.end()), all.end());
  DisjointSets dsu(k);
  for (auto p : all) dsu.unite(p.i, p.j);
  return {dsu.set_count(), all.size()};
}

}  // namespace

std::string_view to_string(Variant v) { return kNames[index_of(v)]; }

std::string_view column_name(Variant v) { return kColumns[index_of(v)]; }

std::optional<Variant> parse_variant(std::string_view text) {
  for (auto v : kVariants) {
    auto col = column_name(v);
    if (text == to_string(v) || text == col || text == col.substr(3)) return v;
  }
  return std::nullopt;
}

bool uses_similarity(Variant v) { return v != Variant::plain && v != Variant::combined; }

ReferenceSimilarities ReferenceSimilarities::compute(const CitationGraph& g,
                                                     const EmbeddingTable& table, NodeId target) {
  ReferenceSimilarities s;
  s.target_ = target;
  auto refs = g.references(target);
  s.refs_.assign(refs.begin(), refs.end());
  const std::size_t k = refs.size();

  std::vector<std::string> ids;
  ids.reserve(k);
  for (auto r : refs) ids.push_back(g.id_of(r));

  // Reference ids are sorted, and pairwise_similarities keeps input order
  // among the present ones, so a single forward walk maps them back.
  auto pw = pairwise_similarities(table, ids);
  s.missing_ = pw.missing.size();
  std::vector<std::size_t> pos;  // position in refs_ of each matrix row
  for (std::size_t m = 0, i = 0; m < pw.matrix.size(); ++m) {
    while (ids[i] != pw.matrix.ids()[m]) ++i;
    pos.push_back(i++);
  }
  s.pairwise_.assign(k * k, kUnknown);
  for (std::size_t a = 0; a < pos.size(); ++a) {
    for (std::size_t b = 0; b < pos.size(); ++b) s.pairwise_[pos[a] * k + pos[b]] = pw.matrix(a, b);
  }

  s.to_target_.assign(k, kUnknown);
  const auto& tid = g.id_of(target);
  if (table.vector(tid)) {
    s.target_has_vector_ = true;
    auto ts = target_similarities(table, tid, ids);
    for (std::size_t m = 0, i = 0; m < ts.values.size(); ++m) {
      while (ids[i] != ts.values[m].first) ++i;
      s.to_target_[i++] = ts.values[m].second;
    }
  }
  return s;
}

std::optional<double> ReferenceSimilarities::between(std::size_t i, std::size_t j) const {
  double v = pairwise_[i * refs_.size() + j];
  if (std::isnan(v)) return std::nullopt;
  return v;
}

std::optional<double> ReferenceSimilarities::to_target(std::size_t i) const {
  double v = to_target_[i];
  if (std::isnan(v)) return std::nullopt;
  return v;
}

std::vector<double> ReferenceSimilarities::target_values() const {
  std::vector<double> out;
  for (double v : to_target_) {
    if (!std::isnan(v)) out.push_back(v);
  }
  return out;
}

std::vector<double> ReferenceSimilarities::pairwise_values() const {
  std::vector<double> out;
  const std::size_t k = refs_.size();
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) {
      double v = pairwise_[i * k + j];
      if (!std::isnan(v)) out.push_back(v);
    }
  }
  return out;
}

std::vector<UndirectedEdge> co_citation_edges(const CitationGraph& g, NodeId v) {
  ReferenceStructure s(g, v);
  return s.to_edges(s.co_citation);
}

std::vector<UndirectedEdge> coupling_edges(const CitationGraph& g, NodeId v) {
  ReferenceStructure s(g, v);
  return s.to_edges(s.coupling);
}

std::vector<UndirectedEdge> semantic_edges(const CitationGraph& g, const ReferenceSimilarities& sims,
                                           double theta1) {
  ReferenceStructure s(g, sims.target());
  return s.to_edges(similar_unlinked(s, sims, theta1));
}

std::vector<UndirectedEdge> filtered_co_citation_edges(const CitationGraph& g,
                                                       const ReferenceSimilarities& sims,
                                                       double theta2) {
  ReferenceStructure s(g, sims.target());
  return s.to_edges(filter_by_similarity(s, s.co_citation, sims, theta2));
}

std::vector<UndirectedEdge> filtered_coupling_edges(const CitationGraph& g,
                                                    const ReferenceSimilarities& sims,
                                                    double theta2) {
  ReferenceStructure s(g, sims.target());
  return s.to_edges(filter_by_similarity(s, s.coupling, sims, theta2));
}

ResolvedThresholds try_resolve_thresholds(const ReferenceSimilarities& sims,
                                          const ThresholdPolicy& policy) {
  ResolvedThresholds out{policy.theta1_override, policy.theta2_override};
  if (!out.theta1) {
    auto values = sims.target_values();
    if (!values.empty()) {
      out.theta1 = policy.theta1_rule == Theta1Rule::mean_target_ref ? stats::mean(values)
                                                                     : stats::lower_quartile(values);
    }
  }
  if (!out.theta2) {
    auto values = policy.theta2_rule == Theta2Rule::iqrmean_pairwise_ref ? sims.pairwise_values()
                                                                         : sims.target_values();
    if (!values.empty()) out.theta2 = stats::iqr_mean(values);
  }
  return out;
}

Thresholds resolve_thresholds(const ReferenceSimilarities& sims, const ThresholdPolicy& policy) {
  auto r = try_resolve_thresholds(sims, policy);
  if (!r.theta1) throw DataError("theta1: no target-reference similarities available");
  if (!r.theta2) throw DataError("theta2: no similarities available");
  return {*r.theta1, *r.theta2};
}

DiversityResult diversity_of(const CitationGraph& g, const EmbeddingTable* table, NodeId v,
                             const ThresholdPolicy& policy) {
  ReferenceStructure s(g, v);
  const std::size_t k = s.refs.size();
  DiversityResult out;
  out.target = v;
  out.n_refs = k;

  auto set = [&](Variant var, VariantCount c) {
    out.sd[index_of(var)] = c.components;
    out.edges[index_of(var)] = c.edges;
  };
  set(Variant::plain, count(k, {&s.direct}));
  set(Variant::combined, count(k, {&s.direct, &s.co_citation, &s.coupling}));

  if (!table) {
    out.theta1 = policy.theta1_override;
    out.theta2 = policy.theta2_override;
    out.error = "no embeddings supplied";
    return out;
  }

  auto sims = ReferenceSimilarities::compute(g, *table, v);
  out.missing_vectors = sims.missing_vectors();
  auto th = try_resolve_thresholds(sims, policy);
  out.theta1 = th.theta1;
  out.theta2 = th.theta2;

  // With fewer than two references there is nothing to connect; thresholds
  // cannot change the count.
  const bool trivial = k < 2;
  std::optional<PairList> e3, e4, e5;
  if (th.theta1) {
    e3 = similar_unlinked(s, sims, *th.theta1);
  }
  if (th.theta2) {
    e4 = filter_by_similarity(s, s.co_citation, sims, *th.theta2);
    e5 = filter_by_similarity(s, s.coupling, sims, *th.theta2);
  }
  const PairList none;
  auto or_none = [&](const std::optional<PairList>& p) -> const PairList* {
    return p ? &*p : &none;
  };
  if (e3 || trivial) {
    set(Variant::semantic_enhanced, count(k, {&s.direct, or_none(e3)}));
    set(Variant::combined_semantic_enhanced,
        count(k, {&s.direct, &s.co_citation, &s.coupling, or_none(e3)}));
  }
  if (e4 || trivial) {
    set(Variant::combined_enhanced, count(k, {&s.direct, or_none(e4), or_none(e5)}));
  }
  if ((e3 && e4) || trivial) {
    set(Variant::semantic_combined_enhanced,
        count(k, {&s.direct, or_none(e3), or_none(e4), or_none(e5)}));
  }
  if (!trivial) {
    if (!th.theta1) {
      out.error = sims.target_has_vector() ? "theta1: no target-reference similarities available"
                                           : "no embedding for target " + g.id_of(v);
    } else if (!th.theta2) {
      out.error = "theta2: no similarities available";
    }
  }
  return out;
}

std::size_t structural_diversity(const CitationGraph& g, const EmbeddingTable* table, NodeId v,
                                 Variant variant, const ThresholdPolicy& policy) {
  if (uses_similarity(variant) && !table) {
    throw DataError(fmt::format("{} needs embeddings", to_string(variant)));
  }
  auto r = diversity_of(g, uses_similarity(variant) ? table : nullptr, v, policy);
  auto value = r.value(variant);
  if (!value) {
    throw DataError(fmt::format("{} unavailable for {}: {}", to_string(variant), g.id_of(v), r.error));
  }
  return *value;
}

std::vector<DiversityResult> compute_all(const CitationGraph& g, const EmbeddingTable* table,
                                         std::span<const NodeId> targets,
                                         const ThresholdPolicy& policy, unsigned threads) {
  if (targets.empty()) throw UsageError("compute_all: empty target set");
  for (auto t : targets) {
    if (!g.contains(t)) throw UsageError(fmt::format("compute_all: unknown node {}", t.value));
  }
  std::vector<DiversityResult> out(targets.size());
  parallel_for(targets.size(), threads, [&](std::size_t i) {
    out[i] = diversity_of(g, table, targets[i], policy);
  });
  return out;
}

std::string diversity_csv(const CitationGraph& g, std::span<const DiversityResult> results) {
  std::string out = "target_id,n_refs";
  for (auto v : kVariants) {
    out += ',';
    out += column_name(v);
  }
  out += ",theta1,theta2\n";
  for (const auto& r : results) {
    out += io::csv_escape(g.id_of(r.target));
    out += ',';
    out += std::to_string(r.n_refs);
    for (auto v : kVariants) {
      out += ',';
      if (auto x = r.value(v)) out += std::to_string(*x);
    }
    for (const auto& t : {r.theta1, r.theta2}) {
      out += ',';
      if (t) out += io::format_double(*t);
    }
    out += '\n';
  }
  return out;
}

std::vector<DiversityResult> parse_diversity_csv(std::string_view text, const CitationGraph& g) {
  std::vector<DiversityResult> out;
  auto parse_size = [](const std::string& s, std::size_t line) -> std::optional<std::size_t> {
    if (s.empty()) return std::nullopt;
    std::size_t v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size()) {
      throw DataError(fmt::format("diversity csv line {}: bad count '{}'", line, s));
    }
    return v;
  };
  auto parse_real = [](const std::string& s, std::size_t line) -> std::optional<double> {
    if (s.empty()) return std::nullopt;
    double v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size()) {
      throw DataError(fmt::format("diversity csv line {}: bad threshold '{}'", line, s));
    }
    return v;
  };
  bool header = true;
  io::for_each_line(text, [&](std::string_view line, std::size_t n) {
    if (io::trim(line).empty()) return;
    auto f = io::split_csv_line(line);
    if (header) {
      if (f.size() != 10 || f[0] != "target_id") {
        throw DataError("diversity csv: unexpected header");
      }
      header = false;
      return;
    }
    if (f.size() != 10) throw DataError(fmt::format("diversity csv line {}: expected 10 fields", n));
    auto v = g.find(f[0]);
    if (!v) throw DataError(fmt::format("diversity csv line {}: unknown paper '{}'", n, f[0]));
    DiversityResult r;
    r.target = *v;
    r.n_refs = parse_size(f[1], n).value_or(0);
    for (auto var : kVariants) r.sd[index_of(var)] = parse_size(f[2 + index_of(var)], n);
    r.theta1 = parse_real(f[8], n);
    r.theta2 = parse_real(f[9], n);
    out.push_back(std::move(r));
  });
  if (header) throw DataError("diversity csv: empty file");
  return out;
}

}  // namespace csd
