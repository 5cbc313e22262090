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

#include "hinforge/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hinforge/error.hpp"
#include "hinforge/rng.hpp"

namespace hinforge {

void PlantedConfig::validate() const {
  if (teams < 1) raise(ErrorCode::InfeasibleConfig, "team count must be >= 1");
  if (min_team_size < 2 || max_team_size < min_team_size) {
    raise(ErrorCode::InfeasibleConfig, "team sizes must satisfy 2 <= min <= max");
  }
  if (min_papers < 1 || max_papers < min_papers) raise(ErrorCode::InfeasibleConfig, "papers must satisfy 1 <= min <= max");
  if (!(p_out >= 0.0 && p_out < p_in && p_in <= 1.0)) {
    raise(ErrorCode::InfeasibleConfig, "probabilities must satisfy 0 <= p_out < p_in <= 1");
  }
  if (static_cast<double>(min_team_size) * p_in < 1.0) {
    raise(ErrorCode::InfeasibleConfig, "expected team authors per paper is below 1 (min_team_size * p_in < 1)");
  }
  if (!(venue_noise >= 0.0 && venue_noise <= 1.0)) raise(ErrorCode::InfeasibleConfig, "venue_noise must be in [0, 1]");
}

PlantedGraph gen_synthetic(const PlantedConfig& cfg) {
  cfg.validate();
  Rng rng = make_rng(cfg.seed, "graph-gen");
  const std::size_t G = cfg.teams;

  std::vector<std::vector<NodeId>> members(G);
  NodeId next = 0;
  for (std::size_t t = 0; t < G; ++t) {
    const auto size = cfg.min_team_size + uniform_index(rng, cfg.max_team_size - cfg.min_team_size + 1);
    for (std::size_t k = 0; k < size; ++k) members[t].push_back(next++);
  }
  const NodeId num_authors = next;
  std::vector<int> team_of(num_authors);
  for (std::size_t t = 0; t < G; ++t) {
    for (NodeId a : members[t]) team_of[a] = static_cast<int>(t);
  }

  // Author lists per paper, grouped by owning team.
  std::vector<std::vector<std::vector<NodeId>>> papers(G);
  for (std::size_t t = 0; t < G; ++t) {
    const auto count = cfg.min_papers + uniform_index(rng, cfg.max_papers - cfg.min_papers + 1);
    for (std::size_t p = 0; p < count; ++p) {
      std::vector<NodeId> authors{members[t].front()};
      for (NodeId a = 0; a < num_authors; ++a) {
        if (a == members[t].front()) continue;
        const double prob = team_of[a] == static_cast<int>(t) ? cfg.p_in : cfg.p_out;
        if (uniform01(rng) < prob) authors.push_back(a);
      }
      papers[t].push_back(std::move(authors));
    }
    // Members that drew no paper of their own team join one, so each team
    // stays connected through its principal.
    for (NodeId a : members[t]) {
      bool seen = false;
      for (const auto& list : papers[t]) seen = seen || std::find(list.begin(), list.end(), a) != list.end();
      if (!seen) {
        auto& list = papers[t][uniform_index(rng, papers[t].size())];
        list.push_back(a);
      }
    }
  }

  RawGraph raw;
  raw.schema["writes"] = {"author", "paper"};
  raw.schema["published_in"] = {"paper", "venue"};
  for (NodeId a = 0; a < num_authors; ++a) {
    raw.add_node(a, "author", "team" + std::to_string(team_of[a]), "a" + std::to_string(a));
  }
  NodeId paper_id = num_authors;
  std::size_t total_papers = 0;
  for (const auto& list : papers) total_papers += list.size();
  const NodeId first_venue = num_authors + static_cast<NodeId>(total_papers);
  for (std::size_t t = 0; t < G; ++t) {
    for (auto& authors : papers[t]) {
      std::sort(authors.begin(), authors.end());
      raw.add_node(paper_id, "paper", std::nullopt, "p" + std::to_string(paper_id - num_authors));
      for (NodeId a : authors) raw.add_edge(a, paper_id, "writes");
      std::size_t venue = t;
      if (G > 1 && uniform01(rng) < cfg.venue_noise) venue = uniform_index(rng, G);
      raw.add_edge(paper_id, first_venue + static_cast<NodeId>(venue), "published_in");
      ++paper_id;
    }
  }
  for (std::size_t t = 0; t < G; ++t) raw.add_node(first_venue + static_cast<NodeId>(t), "venue", std::nullopt, "v" + std::to_string(t));

  PlantedGraph out;
  out.graph = freeze_graph(raw);
  for (NodeId a = 0; a < num_authors; ++a) {
    out.truth[a] = team_of[a];
    out.authors.push_back(a);
  }
  for (std::size_t t = 0; t < G; ++t) out.principals.push_back(members[t].front());
  return out;
}

std::vector<NodeId> busiest_members(const PlantedGraph& planted) {
  const auto& g = planted.graph;
  const EdgeTypeId writes = g.require_edge_type("writes");
  std::map<int, std::pair<std::size_t, NodeId>> best;
  for (const auto& [a, t] : planted.truth) {
    const std::size_t d = g.degree(a, writes);
    auto it = best.find(t);
    if (it == best.end() || d > it->second.first) best[t] = {d, a};
  }
  std::vector<NodeId> out;
  for (const auto& [t, entry] : best) out.push_back(entry.second);
  return out;
}

}  // namespace hinforge
