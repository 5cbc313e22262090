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

#include <filesystem>
#include <iosfwd>
#include <map>

#include "hinforge/graph.hpp"
#include "hinforge/model.hpp"
#include "hinforge/teams.hpp"

namespace hinforge {

// Graph files are tab-separated, one record per line:
//   S <edge type> <endpoint type> <endpoint type>
//   N <id> <type> <label or -> <display name or ->
//   E <src> <dst> <edge type>
// Blank lines and lines starting with '#' are skipped.

void write_graph(const HeterogeneousGraph& g, std::ostream& out);
void write_graph(const HeterogeneousGraph& g, const std::filesystem::path& path);
HeterogeneousGraph read_graph(std::istream& in);
HeterogeneousGraph read_graph(const std::filesystem::path& path);

/// `node_id \t team_id` lines.
void write_truth(const std::map<NodeId, int>& truth, const std::filesystem::path& path);
std::map<NodeId, int> read_truth(const std::filesystem::path& path);

/// Header `node_id`, then d value columns; rows sorted by node id, values in
/// shortest round-trip form.
void export_embeddings(const EmbeddingTable& table, const std::filesystem::path& path);
/// `node_id \t label` for every row of `table` (label "-" when absent).
void export_embedding_labels(const EmbeddingTable& table, const HeterogeneousGraph& g,
                             const std::filesystem::path& path);
/// Reads back `node_id -> vector`.
std::map<NodeId, std::vector<double>> read_embeddings(const std::filesystem::path& path);

/// `team_id \t role \t node_id \t display_name`, role in leader|core|non_core.
void write_team_report(const TeamPartition& p, const HeterogeneousGraph& g, const std::filesystem::path& path);
TeamPartition read_team_report(const std::filesystem::path& path);

std::ofstream open_output(const std::filesystem::path& path);

}  // namespace hinforge
