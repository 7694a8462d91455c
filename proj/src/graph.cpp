#include "csd/graph.hpp"

#include <algorithm>

#include <fmt/format.h>

#include "csd/error.hpp"
#include "csd/union_find.hpp"

namespace csd {

void CitationGraph::check(NodeId v) const {
  if (!contains(v)) {
    throw UsageError(fmt::format("node {} not in graph of {} nodes", v.value, ids_.size()));
  }
}

std::span<const NodeId> CitationGraph::references(NodeId v) const {
  check(v);
  return std::span(out_targets_).subspan(out_offsets_[v.value],
                                         out_offsets_[v.value + 1] - out_offsets_[v.value]);
}

std::span<const NodeId> CitationGraph::citers(NodeId v) const {
  check(v);
  return std::span(in_sources_).subspan(in_offsets_[v.value],
                                        in_offsets_[v.value + 1] - in_offsets_[v.value]);
}

bool CitationGraph::has_edge(NodeId from, NodeId to) const {
  auto refs = references(from);
  return std::binary_search(refs.begin(), refs.end(), to);
}

std::optional<int> CitationGraph::year(NodeId v) const {
  check(v);
  return years_[v.value];
}

const std::string& CitationGraph::id_of(NodeId v) const {
  check(v);
  return ids_[v.value];
}

std::optional<NodeId> CitationGraph::find(std::string_view id) const {
  auto it = std::lower_bound(ids_.begin(), ids_.end(), id);
  if (it == ids_.end() || *it != id) return std::nullopt;
  return NodeId{static_cast<std::uint32_t>(it - ids_.begin())};
}

NodeId CitationGraph::node(std::string_view id) const {
  auto v = find(id);
  if (!v) throw UsageError(fmt::format("unknown paper id '{}'", id));
  return *v;
}

CitationGraph build_graph(const Corpus& corpus) {
  if (corpus.empty()) throw DataError("cannot build a graph from an empty corpus");
  auto records = corpus.records();
  const std::size_t n = records.size();

  CitationGraph g;
  g.ids_.reserve(n);
  g.years_.reserve(n);
  for (const auto& r : records) {
    g.ids_.push_back(r.id);
    g.years_.push_back(r.year);
  }

  // Corpus order is id order and references are sorted by id, so resolved
  // targets come out sorted per node without a second sort.
  g.out_offsets_.assign(n + 1, 0);
  std::vector<std::size_t> in_degree(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (const auto& ref : records[i].references) {
      auto target = g.find(ref);
      if (!target || target->value == i) {
        ++g.skipped_dangling_;
        continue;
      }
      g.out_targets_.push_back(*target);
      ++in_degree[target->value];
    }
    g.out_offsets_[i + 1] = g.out_targets_.size();
  }

  g.in_offsets_.assign(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i) g.in_offsets_[i + 1] = g.in_offsets_[i] + in_degree[i];
  g.in_sources_.resize(g.out_targets_.size());
  std::vector<std::size_t> cursor(g.in_offsets_.begin(), g.in_offsets_.end() - 1);
  // Sources are visited in ascending order, which keeps each in-list sorted.
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t e = g.out_offsets_[i]; e < g.out_offsets_[i + 1]; ++e) {
      g.in_sources_[cursor[g.out_targets_[e].value]++] = NodeId{static_cast<std::uint32_t>(i)};
    }
  }
  return g;
}

std::vector<NodeId> reference_set(const CitationGraph& g, NodeId v) {
  auto refs = g.references(v);
  return {refs.begin(), refs.end()};
}

SubgraphView induced_subgraph(const CitationGraph& g, std::span<const NodeId> nodes) {
  SubgraphView sub;
  sub.nodes.assign(nodes.begin(), nodes.end());
  std::sort(sub.nodes.begin(), sub.nodes.end());
  sub.nodes.erase(std::unique(sub.nodes.begin(), sub.nodes.end()), sub.nodes.end());
  for (auto u : sub.nodes) {
    auto refs = g.references(u);
    // Both lists are sorted; a merge walk finds the members u cites.
    auto a = refs.begin();
    auto b = sub.nodes.begin();
    while (a != refs.end() && b != sub.nodes.end()) {
      if (*a < *b) {
        ++a;
      } else if (*b < *a) {
        ++b;
      } else {
        sub.edges.push_back({u, *a});
        ++a;
        ++b;
      }
    }
  }
  return sub;
}

BaseGraph base_graph(const SubgraphView& sub) {
  BaseGraph bg;
  bg.nodes = sub.nodes;
  bg.edges.reserve(sub.edges.size());
  for (const auto& e : sub.edges) bg.edges.push_back(UndirectedEdge::of(e.from, e.to));
  std::sort(bg.edges.begin(), bg.edges.end());
  bg.edges.erase(std::unique(bg.edges.begin(), bg.edges.end()), bg.edges.end());
  return bg;
}

std::size_t connected_component_count(const BaseGraph& bg) {
  auto local = [&](NodeId v) {
    auto it = std::lower_bound(bg.nodes.begin(), bg.nodes.end(), v);
    if (it == bg.nodes.end() || *it != v) {
      throw UsageError(fmt::format("edge endpoint {} is not a base-graph node", v.value));
    }
    return static_cast<std::size_t>(it - bg.nodes.begin());
  };
  DisjointSets sets(bg.nodes.size());
  for (const auto& e : bg.edges) sets.unite(local(e.a), local(e.b));
  return sets.set_count();
}

std::vector<NodeId> weak_components(const CitationGraph& g) {
  const std::size_t n = g.node_count();
  DisjointSets sets(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (auto u : g.references(NodeId{static_cast<std::uint32_t>(i)})) sets.unite(i, u.value);
  }
  // First visit of a root in ascending order is the component's smallest node.
  std::vector<std::size_t> smallest(n, n);
  std::vector<NodeId> labels(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto root = sets.find(i);
    if (smallest[root] == n) smallest[root] = i;
    labels[i] = NodeId{static_cast<std::uint32_t>(smallest[root])};
  }
  return labels;
}

CitationSeries citation_series(const CitationGraph& g, NodeId v, int start_year, int horizon) {
  if (horizon < 1) throw UsageError("citation_series: horizon must be >= 1");
  CitationSeries s;
  s.counts.assign(static_cast<std::size_t>(horizon), 0);
  for (auto citer : g.citers(v)) {
    auto y = g.year(citer);
    if (!y) {
      ++s.undated_citers;
      continue;
    }
    long offset = static_cast<long>(*y) - start_year;
    if (offset >= 0 && offset < horizon) ++s.counts[static_cast<std::size_t>(offset)];
  }
  return s;
}

std::string edge_list(const CitationGraph& g) {
  std::string out;
  for (std::size_t i = 0; i < g.node_count(); ++i) {
    NodeId v{static_cast<std::uint32_t>(i)};
    for (auto u : g.references(v)) {
      out += g.id_of(v);
      out += '\t';
      out += g.id_of(u);
      out += '\n';
    }
  }
  return out;
}

}  // namespace csd
