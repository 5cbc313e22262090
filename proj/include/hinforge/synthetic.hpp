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

#include <cstdint>
#include <map>
#include <vector>

#include "hinforge/graph.hpp"

namespace hinforge {

/// Planted-team academic graph: authors, papers, venues. Every team has a
/// principal author on all of its papers; other members join each team paper
/// with probability p_in and outsiders join with probability p_out.
struct PlantedConfig {
  std::size_t teams = 5;
  std::size_t min_team_size = 8;
  std::size_t max_team_size = 15;
  std::size_t min_papers = 20;
  std::size_t max_papers = 30;
  double p_in = 0.6;
  double p_out = 0.02;
  /// Chance a paper goes to a random venue instead of its team's venue.
  double venue_noise = 0.1;
  std::uint64_t seed = 0;

  void validate() const;
};

struct PlantedGraph {
  HeterogeneousGraph graph;
  std::map<NodeId, int> truth;        ///< author -> planted team
  std::vector<NodeId> authors;        ///< ascending
  std::vector<NodeId> principals;     ///< one per team, team order
};

/// Node ids: authors team by team, then papers, then one venue per team.
/// Author labels are "team<t>". Types: author, paper, venue; edges: writes,
/// published_in.
PlantedGraph gen_synthetic(const PlantedConfig& cfg);

/// Members of each team with the most papers, ties by lowest id.
std::vector<NodeId> busiest_members(const PlantedGraph& planted);

}  // namespace hinforge
