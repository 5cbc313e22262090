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

#include "hinforge/teams.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "hinforge/error.hpp"
#include "hinforge/metrics.hpp"

namespace hinforge {

void IdentificationConfig::validate() const {
  if (similar_k < 1) raise(ErrorCode::ConfigError, "teams.similar_k must be >= 1");
  if (influential_k < 1) raise(ErrorCode::ConfigError, "teams.influential_k must be >= 1");
  if (max_teams && *max_teams < 1) raise(ErrorCode::ConfigError, "teams.max_teams must be >= 1 when set");
}

std::vector<NodeId> Team::members() const {
  std::vector<NodeId> out{leader};
  out.insert(out.end(), core.begin(), core.end());
  out.insert(out.end(), non_core.begin(), non_core.end());
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<int> TeamPartition::clusters(std::span<const NodeId> universe) const {
  std::map<NodeId, int> cluster;
  int next = 0;
  for (const auto& t : teams) {
    for (NodeId v : t.members()) cluster[v] = next;
    ++next;
  }
  for (NodeId v : residual) cluster[v] = next++;
  if (cluster.size() != universe.size()) {
    raise(ErrorCode::UniverseMismatch, "partition covers " + std::to_string(cluster.size()) + " nodes, universe has " +
                                           std::to_string(universe.size()));
  }
  std::vector<int> out;
  out.reserve(universe.size());
  for (NodeId v : universe) {
    auto it = cluster.find(v);
    if (it == cluster.end()) raise(ErrorCode::UniverseMismatch, "node " + std::to_string(v) + " is not in the partition");
    out.push_back(it->second);
  }
  return out;
}

std::vector<NodeId> TeamPartition::members_of_first(std::size_t k) const {
  std::vector<NodeId> out;
  for (std::size_t t = 0; t < std::min(k, teams.size()); ++t) {
    const auto m = teams[t].members();
    out.insert(out.end(), m.begin(), m.end());
  }
  std::sort(out.begin(), out.end());
  return out;
}

PrefilterResult prefilter_graph(const HeterogeneousGraph& g, const IdentificationConfig& cfg) {
  const NodeTypeId author = g.require_node_type(cfg.author_type);
  const NodeTypeId paper = g.require_node_type(cfg.paper_type);
  const std::size_t n = g.num_nodes();

  std::vector<bool> keep(n, true);
  for (NodeId v = 0; v < n; ++v) {
    if (g.node_type(v) != author) continue;
    std::size_t pubs = 0;
    for (const auto& nb : g.neighbors(v)) {
      if (g.node_type(nb.node) == paper) pubs += nb.multiplicity;
    }
    keep[v] = pubs >= cfg.min_publications;
  }
  // Orphaned papers, then whatever hung only off orphaned papers.
  auto orphaned = [&](NodeId v, NodeTypeId via) {
    bool any = false;
    for (const auto& nb : g.neighbors(v)) {
      if (g.node_type(nb.node) != via) continue;
      any = true;
      if (keep[nb.node]) return false;
    }
    return any;
  };
  for (NodeId v = 0; v < n; ++v) {
    if (g.node_type(v) == paper && orphaned(v, author)) keep[v] = false;
  }
  std::vector<bool> drop_other(n, false);
  for (NodeId v = 0; v < n; ++v) {
    if (g.node_type(v) != author && g.node_type(v) != paper && orphaned(v, paper)) drop_other[v] = true;
  }
  for (NodeId v = 0; v < n; ++v) {
    if (drop_other[v]) keep[v] = false;
  }

  PrefilterResult out;
  out.old_to_new.assign(n, std::nullopt);
  for (NodeId v = 0; v < n; ++v) {
    if (!keep[v]) continue;
    out.old_to_new[v] = static_cast<NodeId>(out.new_to_old.size());
    out.new_to_old.push_back(v);
  }
  bool any_author = false;
  for (NodeId v : out.new_to_old) any_author = any_author || g.node_type(v) == author;
  if (!any_author) raise(ErrorCode::EmptyAfterFilter, "no author meets min_publications=" + std::to_string(cfg.min_publications));

  const RawGraph raw = g.to_raw();
  RawGraph filtered;
  filtered.schema = raw.schema;
  for (const auto& rec : raw.nodes) {
    if (!out.old_to_new[rec.id]) continue;
    NodeRecord copy = rec;
    copy.id = *out.old_to_new[rec.id];
    filtered.nodes.push_back(std::move(copy));
  }
  std::sort(filtered.nodes.begin(), filtered.nodes.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
  for (const auto& e : raw.edges) {
    if (out.old_to_new[e.src] && out.old_to_new[e.dst]) {
      filtered.edges.push_back({*out.old_to_new[e.src], *out.old_to_new[e.dst], e.type});
    }
  }
  out.graph = freeze_graph(filtered);

  // Shared-paper counts between retained authors.
  const auto& fg = out.graph;
  const NodeTypeId fauthor = fg.require_node_type(cfg.author_type);
  const NodeTypeId fpaper = fg.require_node_type(cfg.paper_type);
  out.coauthors.assign(fg.num_nodes(), {});
  const std::size_t min_shared = std::max<std::size_t>(1, cfg.min_coauthor_frequency);
  for (NodeId a : fg.nodes_of_type(fauthor)) {
    std::map<NodeId, std::size_t> shared;
    for (const auto& p : fg.neighbors(a)) {
      if (fg.node_type(p.node) != fpaper) continue;
      std::set<NodeId> seen;
      for (const auto& b : fg.neighbors(p.node)) {
        if (b.node != a && fg.node_type(b.node) == fauthor && seen.insert(b.node).second) ++shared[b.node];
      }
    }
    for (const auto& [b, count] : shared) {
      if (count >= min_shared) out.coauthors[a].push_back(b);
    }
  }
  return out;
}

std::vector<std::vector<std::size_t>> local_neighbor_lists(const EmbeddingTable& embeddings,
                                                           const std::vector<std::vector<NodeId>>& relation) {
  std::map<NodeId, std::size_t> local;
  for (std::size_t i = 0; i < embeddings.nodes.size(); ++i) local[embeddings.nodes[i]] = i;
  std::vector<std::vector<std::size_t>> out(embeddings.nodes.size());
  for (std::size_t i = 0; i < embeddings.nodes.size(); ++i) {
    const NodeId v = embeddings.nodes[i];
    if (v >= relation.size()) continue;
    for (NodeId u : relation[v]) {
      auto it = local.find(u);
      if (it != local.end()) out[i].push_back(it->second);
    }
    std::sort(out[i].begin(), out[i].end());
  }
  return out;
}

std::vector<std::vector<std::size_t>> local_neighbor_lists(const ModelInputs& inputs) {
  std::vector<std::vector<std::size_t>> out(inputs.num_nodes());
  for (std::size_t i = 0; i < inputs.num_nodes(); ++i) {
    std::set<std::size_t> merged;
    for (std::size_t m = 0; m < inputs.num_meta_paths(); ++m) {
      for (std::size_t j : inputs.neighbors(m, i)) merged.insert(j);
    }
    out[i].assign(merged.begin(), merged.end());
  }
  return out;
}

namespace {

double cosine(const std::vector<double>& a, const std::vector<double>& b) {
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    dot += a[k] * b[k];
    na += a[k] * a[k];
    nb += b[k] * b[k];
  }
  const double denom = std::sqrt(na) * std::sqrt(nb);
  return denom < 1e-12 ? 0.0 : dot / denom;
}

/// First `k` of `pool` by descending score, ties by ascending node id.
std::vector<std::size_t> top_by(std::vector<std::size_t> pool, const std::vector<double>& score,
                                std::span<const NodeId> ids, std::size_t k) {
  std::sort(pool.begin(), pool.end(), [&](std::size_t a, std::size_t b) {
    if (score[a] != score[b]) return score[a] > score[b];
    return ids[a] < ids[b];
  });
  if (pool.size() > k) pool.resize(k);
  return pool;
}

}  // namespace

TeamPartition identify_teams(const EmbeddingTable& embeddings, const InfluenceScores& influence,
                             const AttentionTable& attention, std::span<const std::vector<std::size_t>> neighbors,
                             const IdentificationConfig& cfg) {
  cfg.validate();
  const std::size_t n = embeddings.nodes.size();
  const std::span<const NodeId> ids = embeddings.nodes;
  if (embeddings.fused.size() != n) raise(ErrorCode::MissingEmbedding, "embedding table has no fused vector for some nodes");
  for (std::size_t i = 0; i < n; ++i) {
    if (embeddings.fused[i].size() != embeddings.dim || embeddings.dim == 0) {
      raise(ErrorCode::MissingEmbedding, "node " + std::to_string(ids[i]) + " has no embedding");
    }
  }
  std::map<NodeId, double> score_of;
  for (std::size_t k = 0; k < influence.nodes.size(); ++k) score_of[influence.nodes[k]] = influence.scores.at(k);
  std::vector<double> infl(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto it = score_of.find(ids[i]);
    if (it == score_of.end()) raise(ErrorCode::MissingInfluence, "node " + std::to_string(ids[i]) + " has no influence score");
    infl[i] = it->second;
  }
  if (neighbors.size() != n) raise(ErrorCode::LengthMismatch, "neighbor lists do not match the embedding table");
  for (const auto& per_path : attention) {
    if (per_path.size() != n) raise(ErrorCode::LengthMismatch, "attention table does not match the embedding table");
  }

  std::vector<bool> recognized(n, false);
  std::size_t remaining = n;
  std::vector<std::size_t> by_influence(n);
  std::iota(by_influence.begin(), by_influence.end(), std::size_t{0});
  by_influence = top_by(by_influence, infl, ids, n);

  TeamPartition out;
  std::vector<double> similarity(n), received(n);
  std::size_t cursor = 0;
  while (remaining > 0) {
    if (cfg.max_teams && out.teams.size() >= *cfg.max_teams) break;
    while (recognized[by_influence[cursor]]) ++cursor;
    const std::size_t leader = by_influence[cursor];
    recognized[leader] = true;
    --remaining;

    std::vector<std::size_t> open;
    for (std::size_t j = 0; j < n; ++j) {
      if (!recognized[j]) {
        open.push_back(j);
        similarity[j] = cosine(embeddings.fused[leader], embeddings.fused[j]);
      }
    }
    const auto candidates = top_by(open, similarity, ids, cfg.similar_k);

    // Attention the leader pays each neighbor, averaged over meta-paths.
    std::fill(received.begin(), received.end(), 0.0);
    for (const auto& per_path : attention) {
      for (const auto& [j, c] : per_path[leader]) received[j] += c;
    }
    if (!attention.empty()) {
      for (double& r : received) r /= static_cast<double>(attention.size());
    }
    std::vector<std::size_t> open_neighbors;
    for (std::size_t j : neighbors[leader]) {
      if (j < n && !recognized[j] && j != leader) open_neighbors.push_back(j);
    }
    const auto influential = top_by(open_neighbors, received, ids, cfg.influential_k);

    const std::set<std::size_t> candidate_set(candidates.begin(), candidates.end());
    Team team;
    team.leader = ids[leader];
    for (std::size_t j : influential) {
      if (candidate_set.count(j)) team.core.push_back(ids[j]);
    }
    const std::set<NodeId> core_set(team.core.begin(), team.core.end());
    for (std::size_t j : open_neighbors) {
      if (!core_set.count(ids[j])) team.non_core.push_back(ids[j]);
    }
    std::sort(team.core.begin(), team.core.end());
    std::sort(team.non_core.begin(), team.non_core.end());
    team.non_core.erase(std::unique(team.non_core.begin(), team.non_core.end()), team.non_core.end());
    for (std::size_t j : open_neighbors) {
      if (!recognized[j]) {
        recognized[j] = true;
        --remaining;
      }
    }
    if (cfg.keep_residual && team.core.empty() && team.non_core.empty()) {
      out.residual.push_back(team.leader);
    } else {
      out.teams.push_back(std::move(team));
    }
  }
  for (std::size_t j = 0; j < n; ++j) {
    if (!recognized[j]) out.residual.push_back(ids[j]);
  }
  std::sort(out.residual.begin(), out.residual.end());
  return out;
}

double partition_nmi(const TeamPartition& predicted, const std::map<NodeId, int>& truth) {
  std::vector<NodeId> universe;
  std::vector<int> truth_ids;
  for (const auto& [v, t] : truth) {
    universe.push_back(v);
    truth_ids.push_back(t);
  }
  const auto pred = predicted.clusters(universe);
  return nmi(pred, truth_ids);
}

double partition_nmi_top(const TeamPartition& predicted, const std::map<NodeId, int>& truth, std::size_t k) {
  const auto members = predicted.members_of_first(k);
  if (members.empty()) raise(ErrorCode::UniverseMismatch, "no teams to evaluate");
  std::map<NodeId, int> cluster;
  for (std::size_t t = 0; t < std::min(k, predicted.teams.size()); ++t) {
    for (NodeId v : predicted.teams[t].members()) cluster[v] = static_cast<int>(t);
  }
  std::vector<int> pred, gold;
  for (NodeId v : members) {
    auto it = truth.find(v);
    if (it == truth.end()) raise(ErrorCode::UniverseMismatch, "node " + std::to_string(v) + " has no ground-truth team");
    pred.push_back(cluster[v]);
    gold.push_back(it->second);
  }
  return nmi(pred, gold);
}

}  // namespace hinforge
