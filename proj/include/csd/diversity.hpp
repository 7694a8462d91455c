#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "csd/graph.hpp"
#include "csd/semantic.hpp"

namespace csd {

/// The six citation structural diversity measures. Each one counts
/// connected components over a target's reference set after adding a
/// different family of edges to the induced citation subgraph.
enum class Variant {
  plain,                       // sd_r: citations among the references only
  combined,                    // sd_c: + co-citation and coupling
  semantic_enhanced,           // sd_ss: + similarity edges (θ1)
  combined_enhanced,           // sd_cs: + co-citation/coupling filtered by similarity (θ2)
  semantic_combined_enhanced,  // sd_scs: union of ss and cs
  combined_semantic_enhanced,  // sd_css: union of c and ss
};

inline constexpr std::array<Variant, 6> kVariants = {
    Variant::plain,
    Variant::combined,
    Variant::semantic_enhanced,
    Variant::combined_enhanced,
    Variant::semantic_combined_enhanced,
    Variant::combined_semantic_enhanced,
};

constexpr std::size_t index_of(Variant v) { return static_cast<std::size_t>(v); }

std::string_view to_string(Variant v);
/// CSV column name: sd_r, sd_c, sd_ss, sd_cs, sd_scs, sd_css.
std::string_view column_name(Variant v);
/// Accepts either the long name or the column name (with or without "sd_").
std::optional<Variant> parse_variant(std::string_view text);
bool uses_similarity(Variant v);

enum class Theta1Rule { mean_target_ref, lower_quartile_target_ref };
enum class Theta2Rule { iqrmean_pairwise_ref, iqrmean_target_ref };

struct ThresholdPolicy {
  Theta1Rule theta1_rule = Theta1Rule::mean_target_ref;
  Theta2Rule theta2_rule = Theta2Rule::iqrmean_pairwise_ref;
  std::optional<double> theta1_override;
  std::optional<double> theta2_override;

  /// θ1 = mean target↔reference similarity, θ2 = IQRMean of reference pairs.
  static ThresholdPolicy dblp() { return {}; }
  /// θ1 = lower quartile and θ2 = IQRMean, both of target↔reference similarities.
  static ThresholdPolicy pubmed() {
    return {Theta1Rule::lower_quartile_target_ref, Theta2Rule::iqrmean_target_ref, {}, {}};
  }
  static ThresholdPolicy fixed(double theta1, double theta2) {
    return {Theta1Rule::mean_target_ref, Theta2Rule::iqrmean_pairwise_ref, theta1, theta2};
  }
};

struct Thresholds {
  double theta1;
  double theta2;
};

/// Cosine similarities between one target and its references, and among
/// the references. Pairs involving a paper without a vector are unknown.
class ReferenceSimilarities {
 public:
  static ReferenceSimilarities compute(const CitationGraph& g, const EmbeddingTable& table,
                                       NodeId target);

  NodeId target() const { return target_; }
  std::span<const NodeId> refs() const { return refs_; }
  bool target_has_vector() const { return target_has_vector_; }
  /// References lacking a vector (the target is not counted).
  std::size_t missing_vectors() const { return missing_; }

  /// Similarity of refs()[i] and refs()[j]; nullopt if either lacks a vector.
  std::optional<double> between(std::size_t i, std::size_t j) const;
  std::optional<double> to_target(std::size_t i) const;

  /// Known target↔reference similarities, in reference order.
  std::vector<double> target_values() const;
  /// Known reference-pair similarities, i < j in row-major order.
  std::vector<double> pairwise_values() const;

 private:
  NodeId target_;
  std::vector<NodeId> refs_;
  std::vector<double> pairwise_;  // k*k, NaN where unknown
  std::vector<double> to_target_;  // k, NaN where unknown
  bool target_has_vector_ = false;
  std::size_t missing_ = 0;
};

/// E1 restricted to R_v: reference pairs that some paper other than v cites together.
std::vector<UndirectedEdge> co_citation_edges(const CitationGraph& g, NodeId v);

/// E2 restricted to R_v: reference pairs that both cite some common paper.
std::vector<UndirectedEdge> coupling_edges(const CitationGraph& g, NodeId v);

/// E3 restricted to R_v: reference pairs not linked by a citation in either
/// direction whose similarity is >= theta1.
std::vector<UndirectedEdge> semantic_edges(const CitationGraph& g, const ReferenceSimilarities& sims,
                                           double theta1);

/// E4: co-citation pairs not already citation-linked with similarity >= theta2.
std::vector<UndirectedEdge> filtered_co_citation_edges(const CitationGraph& g,
                                                       const ReferenceSimilarities& sims,
                                                       double theta2);

/// E5: coupling pairs not already citation-linked with similarity >= theta2.
std::vector<UndirectedEdge> filtered_coupling_edges(const CitationGraph& g,
                                                    const ReferenceSimilarities& sims,
                                                    double theta2);

struct ResolvedThresholds {
  std::optional<double> theta1;
  std::optional<double> theta2;
};

/// Applies the policy's rules, with overrides taking precedence. A
/// threshold is left empty when its rule has no known similarity to work on.
ResolvedThresholds try_resolve_thresholds(const ReferenceSimilarities& sims,
                                          const ThresholdPolicy& policy);

/// As try_resolve_thresholds, but throws DataError if either is unavailable.
Thresholds resolve_thresholds(const ReferenceSimilarities& sims, const ThresholdPolicy& policy);

struct DiversityResult {
  NodeId target;
  std::size_t n_refs = 0;
  /// Component count per variant (indexed by index_of(Variant)); empty when
  /// the variant could not be computed for this target.
  std::array<std::optional<std::size_t>, 6> sd{};
  /// Undirected edges in each variant's base graph.
  std::array<std::optional<std::size_t>, 6> edges{};
  std::optional<double> theta1;
  std::optional<double> theta2;
  std::size_t missing_vectors = 0;
  /// Why some variants are empty; blank when all requested variants exist.
  std::string error;

  std::optional<std::size_t> value(Variant v) const { return sd[index_of(v)]; }
};

/// All six variants for one target. Similarity variants are left empty when
/// `table` is null or the thresholds they need cannot be resolved.
DiversityResult diversity_of(const CitationGraph& g, const EmbeddingTable* table, NodeId v,
                             const ThresholdPolicy& policy);

/// One variant for one target. Throws DataError if it cannot be computed.
std::size_t structural_diversity(const CitationGraph& g, const EmbeddingTable* table, NodeId v,
                                 Variant variant, const ThresholdPolicy& policy);

/// diversity_of for each target, in target order. Per-target failures are
/// recorded in DiversityResult::error. Throws UsageError on an empty set.
std::vector<DiversityResult> compute_all(const CitationGraph& g, const EmbeddingTable* table,
                                         std::span<const NodeId> targets,
                                         const ThresholdPolicy& policy, unsigned threads = 1);

/// `target_id,n_refs,sd_r,sd_c,sd_ss,sd_cs,sd_scs,sd_css,theta1,theta2`;
/// unavailable values are empty fields.
std::string diversity_csv(const CitationGraph& g, std::span<const DiversityResult> results);

/// Parses diversity_csv output back into results against `g`.
std::vector<DiversityResult> parse_diversity_csv(std::string_view text, const CitationGraph& g);

}  // namespace csd
