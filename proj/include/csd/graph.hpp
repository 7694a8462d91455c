#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "csd/corpus.hpp"

namespace csd {

/// Dense node index. Assigned in ascending external-id order, so it equals
/// the record's position in the (id-sorted) Corpus.
struct NodeId {
  std::uint32_t value = 0;

  friend constexpr auto operator<=>(NodeId, NodeId) = default;
};

/// Citation ⟨from, to⟩: `from` cites `to`.
struct DirectedEdge {
  NodeId from;
  NodeId to;

  friend constexpr auto operator<=>(const DirectedEdge&, const DirectedEdge&) = default;
};

/// Unordered pair, normalised so that a < b.
struct UndirectedEdge {
  NodeId a;
  NodeId b;

  static constexpr UndirectedEdge of(NodeId x, NodeId y) {
    return x < y ? UndirectedEdge{x, y} : UndirectedEdge{y, x};
  }
  friend constexpr auto operator<=>(const UndirectedEdge&, const UndirectedEdge&) = default;
};

/// Directed subgraph induced on a node subset.
struct SubgraphView {
  std::vector<NodeId> nodes;  // sorted
  std::vector<DirectedEdge> edges;  // sorted
};

/// Undirected view of a SubgraphView; antiparallel edges collapse.
struct BaseGraph {
  std::vector<NodeId> nodes;  // sorted
  std::vector<UndirectedEdge> edges;  // sorted, unique
};

/// Immutable citation digraph in CSR form with forward (references) and
/// reverse (citers) adjacency, both sorted.
class CitationGraph {
 public:
  CitationGraph() = default;

  std::size_t node_count() const { return ids_.size(); }
  std::size_t edge_count() const { return out_targets_.size(); }
  /// Resolvable-reference misses encountered while building.
  std::size_t skipped_dangling() const { return skipped_dangling_; }

  bool contains(NodeId v) const { return v.value < ids_.size(); }
  std::span<const NodeId> references(NodeId v) const;
  std::span<const NodeId> citers(NodeId v) const;
  bool has_edge(NodeId from, NodeId to) const;
  std::optional<int> year(NodeId v) const;

  const std::string& id_of(NodeId v) const;
  std::optional<NodeId> find(std::string_view id) const;
  /// Throws UsageError for an unknown id.
  NodeId node(std::string_view id) const;

  friend CitationGraph build_graph(const Corpus& corpus);

 private:
  void check(NodeId v) const;

  std::vector<std::string> ids_;
  std::vector<std::optional<int>> years_;
  std::vector<std::size_t> out_offsets_;
  std::vector<NodeId> out_targets_;
  std::vector<std::size_t> in_offsets_;
  std::vector<NodeId> in_sources_;
  std::size_t skipped_dangling_ = 0;
};

/// One node per record, one edge per resolvable reference. Throws DataError
/// on an empty corpus.
CitationGraph build_graph(const Corpus& corpus);

/// R_v: every node `v` cites. Throws UsageError for unknown `v`.
std::vector<NodeId> reference_set(const CitationGraph& g, NodeId v);

SubgraphView induced_subgraph(const CitationGraph& g, std::span<const NodeId> nodes);

BaseGraph base_graph(const SubgraphView& sub);

/// Number of connected components (union-find); 0 for an empty graph.
std::size_t connected_component_count(const BaseGraph& bg);

/// Weak-component label per node: the smallest NodeId in the component.
std::vector<NodeId> weak_components(const CitationGraph& g);

struct CitationSeries {
  std::vector<std::size_t> counts;  // counts[t] = citers published in start_year + t
  std::size_t undated_citers = 0;
};

CitationSeries citation_series(const CitationGraph& g, NodeId v, int start_year, int horizon);

/// `citing_id<TAB>cited_id` lines sorted by (citing, cited).
std::string edge_list(const CitationGraph& g);

}  // namespace csd
