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

#include <span>
#include <string_view>
#include <vector>

#include "hinforge/graph.hpp"
#include "hinforge/model.hpp"

namespace hinforge {

enum class InfluenceMethod { NAC, DC, BC, CC, EC };

std::string_view to_string(InfluenceMethod m);

/// Non-negative score per node; rankings break ties by ascending node id.
struct InfluenceScores {
  InfluenceMethod method = InfluenceMethod::NAC;
  std::vector<NodeId> nodes;
  std::vector<double> scores;

  /// Indices into `nodes`, best first.
  std::vector<std::size_t> ranking() const;
  std::vector<NodeId> top_k(std::size_t k) const;
};

/// Mean attention each node receives from the nodes whose neighborhood it is
/// in, averaged over meta-paths (0 where it receives none).
InfluenceScores nac_influence(const ForwardState& state, const ModelInputs& inputs);

/// Unweighted undirected graph over local indices.
struct SimpleGraph {
  std::vector<NodeId> nodes;
  std::vector<std::vector<std::size_t>> adj;  ///< sorted, no self loops

  std::size_t size() const noexcept { return nodes.size(); }
};

/// Edge between two start-type nodes iff the meta-path connects them at least once.
SimpleGraph projection_graph(const MetaPathAdjacency& adj);

/// DC = deg/(n-1); BC = Brandes, normalized by (n-1)(n-2)/2; CC = harmonic
/// closeness / (n-1); EC = power iteration on the largest component,
/// L2-normalized, 0 elsewhere.
InfluenceScores centrality(const SimpleGraph& g, InfluenceMethod kind);

/// |topK(a) ∩ topK(b)| / K.
double topk_intersection(const InfluenceScores& a, const InfluenceScores& b, std::size_t k);

}  // namespace hinforge
