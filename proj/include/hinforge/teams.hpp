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

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hinforge/graph.hpp"
#include "hinforge/influence.hpp"
#include "hinforge/model.hpp"

namespace hinforge {

struct IdentificationConfig {
  std::size_t similar_k = 15;      ///< K
  std::size_t influential_k = 10;  ///< K'
  std::size_t min_publications = 10;
  std::size_t min_coauthor_frequency = 5;
  std::optional<std::size_t> max_teams;
  /// Leave neighborless leftovers unassigned instead of making singleton teams.
  bool keep_residual = false;
  std::string author_type = "author";
  std::string paper_type = "paper";

  void validate() const;
};

struct Team {
  NodeId leader = 0;
  std::vector<NodeId> core;      ///< ascending
  std::vector<NodeId> non_core;  ///< ascending

  std::size_t size() const noexcept { return 1 + core.size() + non_core.size(); }
  std::vector<NodeId> members() const;
};

struct TeamPartition {
  std::vector<Team> teams;  ///< discovery order
  std::vector<NodeId> residual;

  /// One cluster id per node of `universe`: team index, or a fresh id for
  /// each residual node. UniverseMismatch if coverage differs.
  std::vector<int> clusters(std::span<const NodeId> universe) const;
  /// Nodes of the first `k` teams, ascending.
  std::vector<NodeId> members_of_first(std::size_t k) const;
};

struct PrefilterResult {
  HeterogeneousGraph graph;
  std::vector<NodeId> new_to_old;
  std::vector<std::optional<NodeId>> old_to_new;
  /// Retained co-authorship relation over new ids, lists ascending; empty for
  /// non-author nodes.
  std::vector<std::vector<NodeId>> coauthors;
};

/// Keeps authors with >= min_publications paper edges. Papers lose out only
/// when every author they had was dropped; other nodes only when every paper
/// they touched was dropped.
PrefilterResult prefilter_graph(const HeterogeneousGraph& g, const IdentificationConfig& cfg);

/// Per local node of `embeddings`, the neighbor local indices used for steps
/// (3) and (4), built from a co-author relation over graph ids.
std::vector<std::vector<std::size_t>> local_neighbor_lists(const EmbeddingTable& embeddings,
                                                           const std::vector<std::vector<NodeId>>& relation);

std::vector<std::vector<std::size_t>> local_neighbor_lists(const ModelInputs& inputs);

TeamPartition identify_teams(const EmbeddingTable& embeddings, const InfluenceScores& influence,
                             const AttentionTable& attention, std::span<const std::vector<std::size_t>> neighbors,
                             const IdentificationConfig& cfg);

/// NMI of a team partition against `node -> team` ground truth over the same nodes.
double partition_nmi(const TeamPartition& predicted, const std::map<NodeId, int>& truth);

/// NMI restricted to the members of the first k teams.
double partition_nmi_top(const TeamPartition& predicted, const std::map<NodeId, int>& truth, std::size_t k);

}  // namespace hinforge
