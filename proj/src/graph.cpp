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

#include "hinforge/graph.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <set>

#include "hinforge/error.hpp"

namespace hinforge {

std::uint16_t TypeRegistry::intern(std::string_view name) {
  if (auto it = ids_.find(std::string(name)); it != ids_.end()) return it->second;
  if (names_.size() >= std::numeric_limits<std::uint16_t>::max()) {
    raise(ErrorCode::TypeMismatch, "too many distinct type names");
  }
  const auto id = static_cast<std::uint16_t>(names_.size());
  names_.emplace_back(name);
  ids_.emplace(std::string(name), id);
  return id;
}

std::optional<std::uint16_t> TypeRegistry::find(std::string_view name) const {
  if (auto it = ids_.find(std::string(name)); it != ids_.end()) return it->second;
  return std::nullopt;
}

void RawGraph::add_node(NodeId id, std::string type, std::optional<std::string> label,
                        std::optional<std::string> display_name) {
  nodes.push_back({id, std::move(type), std::move(label), std::move(display_name)});
}

void RawGraph::add_edge(NodeId src, NodeId dst, std::string type) {
  edges.push_back({src, dst, std::move(type)});
}

std::span<const Neighbor> HeterogeneousGraph::neighbors(NodeId v) const {
  if (v >= num_nodes()) raise(ErrorCode::DanglingEdge, "node " + std::to_string(v) + " does not exist");
  return std::span<const Neighbor>(adjacency_).subspan(offsets_[v], offsets_[v + 1] - offsets_[v]);
}

std::size_t HeterogeneousGraph::degree(NodeId v, EdgeTypeId t) const {
  std::size_t d = 0;
  for (const auto& n : neighbors(v)) {
    if (n.type == t) d += n.multiplicity;
  }
  return d;
}

std::vector<NodeId> HeterogeneousGraph::nodes_of_type(NodeTypeId t) const {
  std::vector<NodeId> out;
  for (NodeId v = 0; v < num_nodes(); ++v) {
    if (node_types_[v] == t) out.push_back(v);
  }
  return out;
}

NodeTypeId HeterogeneousGraph::require_node_type(std::string_view name) const {
  auto id = node_type_names_.find(name);
  if (!id) raise(ErrorCode::UnknownType, "unknown node type '" + std::string(name) + "'");
  return NodeTypeId{*id};
}

EdgeTypeId HeterogeneousGraph::require_edge_type(std::string_view name) const {
  auto id = edge_type_names_.find(name);
  if (!id) raise(ErrorCode::UnknownType, "unknown edge type '" + std::string(name) + "'");
  return EdgeTypeId{*id};
}

RawGraph HeterogeneousGraph::to_raw() const {
  RawGraph raw;
  for (NodeId v = 0; v < num_nodes(); ++v) {
    std::optional<std::string> label;
    if (labels_[v]) label = label_names_.name(static_cast<std::uint16_t>(*labels_[v]));
    std::optional<std::string> display;
    if (!display_names_[v].empty()) display = display_names_[v];
    raw.add_node(v, node_type_names_.name(node_types_[v].value), label, display);
  }
  for (std::uint16_t t = 0; t < edge_type_names_.size(); ++t) {
    raw.schema[edge_type_names_.name(t)] = {node_type_names_.name(edge_schema_[t].first.value),
                                            node_type_names_.name(edge_schema_[t].second.value)};
  }
  for (NodeId v = 0; v < num_nodes(); ++v) {
    for (const auto& n : neighbors(v)) {
      if (n.node < v) continue;
      for (std::uint32_t m = 0; m < n.multiplicity; ++m) {
        raw.add_edge(v, n.node, edge_type_names_.name(n.type.value));
      }
    }
  }
  return raw;
}

HeterogeneousGraph freeze_graph(const RawGraph& raw) {
  HeterogeneousGraph g;
  const std::size_t n = raw.nodes.size();

  std::vector<const NodeRecord*> by_id(n, nullptr);
  for (const auto& rec : raw.nodes) {
    if (rec.id >= n) {
      raise(ErrorCode::ParseError, "node ids must be dense 0..N-1; got " + std::to_string(rec.id) +
                                       " with N=" + std::to_string(n));
    }
    if (by_id[rec.id] != nullptr) raise(ErrorCode::DuplicateNodeId, "node " + std::to_string(rec.id));
    by_id[rec.id] = &rec;
  }

  g.node_types_.reserve(n);
  g.labels_.reserve(n);
  g.display_names_.reserve(n);
  for (const NodeRecord* rec : by_id) {
    g.node_types_.push_back(NodeTypeId{g.node_type_names_.intern(rec->type)});
    if (rec->label && !rec->label->empty()) {
      g.labels_.emplace_back(g.label_names_.intern(*rec->label));
    } else {
      g.labels_.emplace_back(std::nullopt);
    }
    g.display_names_.push_back(rec->display_name.value_or(std::string{}));
  }

  auto canonical = [](NodeTypeId a, NodeTypeId b) { return a <= b ? std::pair{a, b} : std::pair{b, a}; };

  // Edge type ids follow name order so they do not depend on edge order.
  std::set<std::string> edge_names;
  for (const auto& [name, ends] : raw.schema) edge_names.insert(name);
  for (const auto& e : raw.edges) edge_names.insert(e.type);
  for (const auto& name : edge_names) g.edge_type_names_.intern(name);
  std::vector<std::optional<std::pair<NodeTypeId, NodeTypeId>>> schema(edge_names.size());
  for (const auto& [name, ends] : raw.schema) {
    const auto a = g.node_type_names_.intern(ends.first);
    const auto b = g.node_type_names_.intern(ends.second);
    schema[*g.edge_type_names_.find(name)] = canonical(NodeTypeId{a}, NodeTypeId{b});
  }

  // (src, dst, type) -> multiplicity, both directions
  std::vector<std::vector<Neighbor>> adj(n);
  for (const auto& e : raw.edges) {
    if (e.src >= n) raise(ErrorCode::DanglingEdge, "src " + std::to_string(e.src));
    if (e.dst >= n) raise(ErrorCode::DanglingEdge, "dst " + std::to_string(e.dst));
    if (e.src == e.dst) raise(ErrorCode::TypeMismatch, "self loop on node " + std::to_string(e.src));
    const auto ends = canonical(g.node_types_[e.src], g.node_types_[e.dst]);
    const auto t = *g.edge_type_names_.find(e.type);
    if (!schema[t]) {
      schema[t] = ends;
    } else if (*schema[t] != ends) {
      raise(ErrorCode::TypeMismatch, "edge type '" + e.type + "' between " +
                                         g.node_type_names_.name(ends.first.value) + " and " +
                                         g.node_type_names_.name(ends.second.value));
    }
    adj[e.src].push_back({e.dst, EdgeTypeId{t}, 1});
    adj[e.dst].push_back({e.src, EdgeTypeId{t}, 1});
  }

  for (const auto& ends : schema) g.edge_schema_.push_back(ends.value_or(std::pair<NodeTypeId, NodeTypeId>{}));

  g.offsets_.assign(n + 1, 0);
  for (std::size_t v = 0; v < n; ++v) {
    auto& list = adj[v];
    std::sort(list.begin(), list.end(), [](const Neighbor& a, const Neighbor& b) {
      return std::pair{a.node, a.type} < std::pair{b.node, b.type};
    });
    std::vector<Neighbor> merged;
    for (const auto& nb : list) {
      if (!merged.empty() && merged.back().node == nb.node && merged.back().type == nb.type) {
        ++merged.back().multiplicity;
      } else {
        merged.push_back(nb);
      }
    }
    for (const auto& nb : merged) {
      if (nb.node > v) ++g.num_edges_;
    }
    g.adjacency_.insert(g.adjacency_.end(), merged.begin(), merged.end());
    g.offsets_[v + 1] = g.adjacency_.size();
  }
  return g;
}

MetaPath::MetaPath(std::vector<NodeTypeId> node_types, std::vector<std::optional<EdgeTypeId>> edge_types)
    : node_types_(std::move(node_types)), edge_types_(std::move(edge_types)) {
  if (node_types_.size() < 2 || node_types_.size() > kMaxMetaPathLength) {
    raise(ErrorCode::InvalidMetaPath, "meta-path length must be in [2, " + std::to_string(kMaxMetaPathLength) +
                                          "], got " + std::to_string(node_types_.size()));
  }
  if (edge_types_.empty()) edge_types_.resize(node_types_.size() - 1);
  if (edge_types_.size() != node_types_.size() - 1) {
    raise(ErrorCode::InvalidMetaPath, "edge type list must have one entry per hop");
  }
  symmetric_ = std::equal(node_types_.begin(), node_types_.end(), node_types_.rbegin()) &&
               std::equal(edge_types_.begin(), edge_types_.end(), edge_types_.rbegin());
}

MetaPath MetaPath::from_names(const HeterogeneousGraph& g, std::span<const std::string> node_types,
                              std::span<const std::string> edge_types) {
  std::vector<NodeTypeId> nt;
  for (const auto& name : node_types) nt.push_back(g.require_node_type(name));
  std::vector<std::optional<EdgeTypeId>> et;
  for (const auto& name : edge_types) {
    if (name.empty() || name == "*") {
      et.emplace_back(std::nullopt);
    } else {
      et.emplace_back(g.require_edge_type(name));
    }
  }
  return MetaPath(std::move(nt), std::move(et));
}

std::string MetaPath::name(const HeterogeneousGraph& g) const {
  std::string out;
  for (std::size_t i = 0; i < node_types_.size(); ++i) {
    if (i) out += '-';
    out += g.node_type_names().name(node_types_[i].value);
  }
  return out;
}

std::uint64_t PathCountMatrix::at(NodeId i, NodeId j) const {
  auto it = std::lower_bound(sources.begin(), sources.end(), i);
  if (it == sources.end() || *it != i) return 0;
  const auto& row = rows[static_cast<std::size_t>(it - sources.begin())];
  auto jt = std::lower_bound(row.begin(), row.end(), std::pair<NodeId, std::uint64_t>{j, 0});
  return (jt != row.end() && jt->first == j) ? jt->second : 0;
}

namespace {

void check_types_exist(const HeterogeneousGraph& g, const MetaPath& path) {
  for (auto t : path.node_types()) {
    if (t.value >= g.node_type_names().size()) raise(ErrorCode::UnknownType, "node type id " + std::to_string(t.value));
  }
  for (const auto& t : path.edge_types()) {
    if (t && t->value >= g.edge_type_names().size()) {
      raise(ErrorCode::UnknownType, "edge type id " + std::to_string(t->value));
    }
  }
}

struct WalkCounter {
  const HeterogeneousGraph& g;
  const MetaPath& path;
  std::array<NodeId, kMaxMetaPathLength> walk{};
  std::map<NodeId, std::uint64_t> counts;

  void extend(std::size_t pos, std::uint64_t weight) {
    const std::size_t last = path.length() - 1;
    const NodeId start = walk[0];
    const auto want_edge = path.edge_types()[pos - 1];
    for (const auto& nb : g.neighbors(walk[pos - 1])) {
      if (g.node_type(nb.node) != path.node_types()[pos]) continue;
      if (want_edge && nb.type != *want_edge) continue;
      if (nb.node == start) continue;
      walk[pos] = nb.node;
      const std::uint64_t w = weight * nb.multiplicity;
      if (pos == last) {
        bool passes_end = false;
        for (std::size_t k = 1; k < last; ++k) passes_end = passes_end || walk[k] == nb.node;
        if (!passes_end) counts[nb.node] += w;
      } else {
        extend(pos + 1, w);
      }
    }
  }
};

}  // namespace

PathCountMatrix path_instance_counts(const HeterogeneousGraph& g, const MetaPath& path) {
  check_types_exist(g, path);
  PathCountMatrix out;
  out.sources = g.nodes_of_type(path.start_type());
  out.rows.reserve(out.sources.size());
  WalkCounter counter{g, path, {}, {}};
  for (NodeId s : out.sources) {
    counter.counts.clear();
    counter.walk[0] = s;
    counter.extend(1, 1);
    out.rows.emplace_back(counter.counts.begin(), counter.counts.end());
  }
  return out;
}

MetaPathAdjacency::MetaPathAdjacency(MetaPath path, std::vector<NodeId> start_nodes, std::vector<NodeId> end_nodes,
                                     std::vector<std::vector<AdjacencyEntry>> rows, std::size_t universe)
    : path_(std::move(path)),
      start_nodes_(std::move(start_nodes)),
      end_nodes_(std::move(end_nodes)),
      start_index_(universe, -1),
      end_index_(universe, -1),
      rows_(std::move(rows)) {
  for (std::size_t i = 0; i < start_nodes_.size(); ++i) start_index_.at(start_nodes_[i]) = static_cast<std::int64_t>(i);
  for (std::size_t i = 0; i < end_nodes_.size(); ++i) end_index_.at(end_nodes_[i]) = static_cast<std::int64_t>(i);
}

std::optional<std::size_t> MetaPathAdjacency::start_index(NodeId v) const {
  if (v >= start_index_.size() || start_index_[v] < 0) return std::nullopt;
  return static_cast<std::size_t>(start_index_[v]);
}

std::optional<std::size_t> MetaPathAdjacency::end_index(NodeId v) const {
  if (v >= end_index_.size() || end_index_[v] < 0) return std::nullopt;
  return static_cast<std::size_t>(end_index_[v]);
}

std::span<const AdjacencyEntry> MetaPathAdjacency::row(NodeId v) const {
  auto idx = start_index(v);
  if (!idx) raise(ErrorCode::WrongStartType, "node " + std::to_string(v) + " is not of the meta-path start type");
  return rows_[*idx];
}

MetaPathAdjacency meta_path_adjacency(const HeterogeneousGraph& g, const MetaPath& path) {
  PathCountMatrix counts = path_instance_counts(g, path);
  std::vector<std::vector<AdjacencyEntry>> rows;
  rows.reserve(counts.rows.size());
  for (const auto& row : counts.rows) {
    std::uint64_t total = 0;
    for (const auto& [j, c] : row) total += c;
    std::vector<AdjacencyEntry> out;
    out.reserve(row.size());
    for (const auto& [j, c] : row) {
      out.push_back({j, c, static_cast<double>(c) / static_cast<double>(total)});
    }
    rows.push_back(std::move(out));
  }
  return MetaPathAdjacency(path, std::move(counts.sources), g.nodes_of_type(path.end_type()), std::move(rows),
                           g.num_nodes());
}

std::vector<std::pair<NodeId, double>> neighbors_via(const MetaPathAdjacency& adj, NodeId v) {
  std::vector<std::pair<NodeId, double>> out;
  for (const auto& e : adj.row(v)) out.emplace_back(e.node, e.weight);
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  return out;
}

}  // namespace hinforge
