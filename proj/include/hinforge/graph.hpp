/* Copyright (c) 2026 The hinforge Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License. */

#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace hinforge {

using NodeId = std::uint32_t;

template <typename Tag>
struct TypeId {
  std::uint16_t value = 0;
  friend auto operator<=>(TypeId, TypeId) = default;
};

using NodeTypeId = TypeId<struct NodeTypeTag>;
using EdgeTypeId = TypeId<struct EdgeTypeTag>;
using LabelId = std::uint32_t;

/// Bijective string <-> dense id table. Ids are handed out in first-seen order.
class TypeRegistry {
 public:
  std::uint16_t intern(std::string_view name);
  std::optional<std::uint16_t> find(std::string_view name) const;
  const std::string& name(std::uint16_t id) const { return names_.at(id); }
  std::size_t size() const noexcept { return names_.size(); }

  friend bool operator==(const TypeRegistry& a, const TypeRegistry& b) { return a.names_ == b.names_; }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, std::uint16_t> ids_;
};

struct NodeRecord {
  NodeId id = 0;
  std::string type;
  std::optional<std::string> label;
  std::optional<std::string> display_name;
};

struct EdgeRecord {
  NodeId src = 0;
  NodeId dst = 0;
  std::string type;
};

/// Mutable input to `freeze_graph`. The optional schema pins the endpoint
/// node types of an edge type; undeclared edge types take their schema from
/// the first edge seen.
struct RawGraph {
  std::vector<NodeRecord> nodes;
  std::vector<EdgeRecord> edges;
  std::map<std::string, std::pair<std::string, std::string>> schema;

  void add_node(NodeId id, std::string type, std::optional<std::string> label = std::nullopt,
                std::optional<std::string> display_name = std::nullopt);
  void add_edge(NodeId src, NodeId dst, std::string type);
};

struct Neighbor {
  NodeId node = 0;
  EdgeTypeId type;
  std::uint32_t multiplicity = 1;

  friend bool operator==(const Neighbor&, const Neighbor&) = default;
};

/// Frozen, undirected, typed graph. Multi-edges are collapsed into a single
/// adjacency entry carrying the multiplicity.
class HeterogeneousGraph {
 public:
  std::size_t num_nodes() const noexcept { return node_types_.size(); }
  std::size_t num_edges() const noexcept { return num_edges_; }

  NodeTypeId node_type(NodeId v) const { return node_types_.at(v); }
  std::optional<LabelId> label(NodeId v) const { return labels_.at(v); }
  const std::string& display_name(NodeId v) const { return display_names_.at(v); }

  /// Sorted by (node, edge type).
  std::span<const Neighbor> neighbors(NodeId v) const;
  std::size_t degree(NodeId v) const { return neighbors(v).size(); }
  /// Number of incident edges of type `t`, counting multiplicity.
  std::size_t degree(NodeId v, EdgeTypeId t) const;

  std::vector<NodeId> nodes_of_type(NodeTypeId t) const;

  const TypeRegistry& node_type_names() const noexcept { return node_type_names_; }
  const TypeRegistry& edge_type_names() const noexcept { return edge_type_names_; }
  const TypeRegistry& label_names() const noexcept { return label_names_; }

  NodeTypeId require_node_type(std::string_view name) const;
  EdgeTypeId require_edge_type(std::string_view name) const;
  std::pair<NodeTypeId, NodeTypeId> edge_endpoints(EdgeTypeId t) const { return edge_schema_.at(t.value); }

  /// Inverse of `freeze_graph`; multiplicities expand back into repeated edges.
  RawGraph to_raw() const;

  friend bool operator==(const HeterogeneousGraph&, const HeterogeneousGraph&) = default;

 private:
  friend HeterogeneousGraph freeze_graph(const RawGraph& raw);

  TypeRegistry node_type_names_;
  TypeRegistry edge_type_names_;
  TypeRegistry label_names_;
  std::vector<NodeTypeId> node_types_;
  std::vector<std::optional<LabelId>> labels_;
  std::vector<std::string> display_names_;
  std::vector<std::pair<NodeTypeId, NodeTypeId>> edge_schema_;
  std::vector<std::size_t> offsets_;
  std::vector<Neighbor> adjacency_;
  std::size_t num_edges_ = 0;
};

HeterogeneousGraph freeze_graph(const RawGraph& raw);

inline constexpr std::size_t kMaxMetaPathLength = 5;

/// Node-type sequence with optional edge-type constraints between positions.
class MetaPath {
 public:
  MetaPath(std::vector<NodeTypeId> node_types, std::vector<std::optional<EdgeTypeId>> edge_types);

  /// Resolves type names against `g`. Edge type names may be empty (any edge).
  static MetaPath from_names(const HeterogeneousGraph& g, std::span<const std::string> node_types,
                             std::span<const std::string> edge_types = {});

  std::span<const NodeTypeId> node_types() const noexcept { return node_types_; }
  std::span<const std::optional<EdgeTypeId>> edge_types() const noexcept { return edge_types_; }
  std::size_t length() const noexcept { return node_types_.size(); }
  NodeTypeId start_type() const { return node_types_.front(); }
  NodeTypeId end_type() const { return node_types_.back(); }
  bool symmetric() const noexcept { return symmetric_; }

  std::string name(const HeterogeneousGraph& g) const;

  friend bool operator==(const MetaPath&, const MetaPath&) = default;

 private:
  std::vector<NodeTypeId> node_types_;
  std::vector<std::optional<EdgeTypeId>> edge_types_;
  bool symmetric_ = false;
};

/// Sparse path-instance count matrix, one row per node of the start type.
struct PathCountMatrix {
  std::vector<NodeId> sources;
  std::vector<std::vector<std::pair<NodeId, std::uint64_t>>> rows;

  std::uint64_t at(NodeId i, NodeId j) const;
};

/// Walks whose node-type sequence matches `path`. Walks that pass through
/// either endpoint internally are not counted, and i == j is omitted.
/// Each walk contributes the product of its edge multiplicities.
PathCountMatrix path_instance_counts(const HeterogeneousGraph& g, const MetaPath& path);

struct AdjacencyEntry {
  NodeId node = 0;
  std::uint64_t count = 0;
  double weight = 0.0;
};

/// L1-normalized meta-path adjacency vectors A_i for every start-type node.
class MetaPathAdjacency {
 public:
  MetaPathAdjacency(MetaPath path, std::vector<NodeId> start_nodes, std::vector<NodeId> end_nodes,
                    std::vector<std::vector<AdjacencyEntry>> rows, std::size_t universe);

  const MetaPath& meta_path() const noexcept { return path_; }
  std::span<const NodeId> start_nodes() const noexcept { return start_nodes_; }
  std::span<const NodeId> end_nodes() const noexcept { return end_nodes_; }

  std::optional<std::size_t> start_index(NodeId v) const;
  std::optional<std::size_t> end_index(NodeId v) const;

  /// Entries sorted by node id. Throws WrongStartType.
  std::span<const AdjacencyEntry> row(NodeId v) const;
  std::span<const AdjacencyEntry> row_at(std::size_t start_local) const { return rows_.at(start_local); }

 private:
  MetaPath path_;
  std::vector<NodeId> start_nodes_;
  std::vector<NodeId> end_nodes_;
  std::vector<std::int64_t> start_index_;
  std::vector<std::int64_t> end_index_;
  std::vector<std::vector<AdjacencyEntry>> rows_;
};

MetaPathAdjacency meta_path_adjacency(const HeterogeneousGraph& g, const MetaPath& path);

/// Row of `adj` ordered by descending weight, ties by ascending node id.
std::vector<std::pair<NodeId, double>> neighbors_via(const MetaPathAdjacency& adj, NodeId v);

}  // namespace hinforge
