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
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hinforge/fed.hpp"
#include "hinforge/graph.hpp"
#include "hinforge/influence.hpp"
#include "hinforge/metrics.hpp"
#include "hinforge/model.hpp"
#include "hinforge/synthetic.hpp"
#include "hinforge/teams.hpp"

namespace hinforge {

inline constexpr int kConfigSchemaVersion = 1;

struct MetaPathSpec {
  std::vector<std::string> node_types;
  std::vector<std::string> edge_types;  ///< empty, or one per hop ("" = any)
};

struct FedSettings {
  std::size_t clients = 3;
  std::size_t rounds = 10;
  double alpha = 0.5;
  std::uint64_t threshold = 4;
  bool asynchronous = false;
  /// Round period per worker; empty means every worker joins every round.
  std::vector<std::size_t> periods;
};

struct SensitivitySettings {
  std::vector<std::size_t> epochs{1, 3, 5};
  std::vector<std::size_t> batch_sizes{64, 128, 256};
  std::size_t clients = 3;
  std::size_t rounds = 10;
};

struct RunConfig {
  std::optional<std::filesystem::path> graph;
  std::optional<PlantedConfig> synthetic;
  std::optional<std::filesystem::path> truth;
  std::optional<std::filesystem::path> checkpoint;
  std::optional<std::filesystem::path> team_report;
  std::string target_type = "author";
  std::vector<MetaPathSpec> meta_paths;
  Hyperparams model;  ///< local_epochs doubles as the centralized epoch count
  IdentificationConfig teams;
  FedSettings fed;
  SensitivitySettings sensitivity;
  std::filesystem::path out = "out";
  std::optional<std::uint64_t> seed;
  std::string source_text;  ///< config as given, echoed into the manifest

  static RunConfig defaults();
};

/// Parses the JSON config; relative paths resolve against the file's
/// directory. ConfigError names the offending field.
RunConfig load_run_config(const std::filesystem::path& path);
RunConfig parse_run_config(const std::string& text, const std::filesystem::path& base_dir);

enum class Mode { Gen, Train, FedTrain, Embed, Influence, Teams, Eval, Sensitivity };
Mode parse_mode(const std::string& name);
std::string to_string(Mode mode);

/// Runs one mode and writes its artifacts plus manifest.json under cfg.out.
/// Returns the metric summary written to the manifest, as JSON text.
std::string run_pipeline(const RunConfig& cfg, Mode mode);

// Building blocks shared by the modes and the acceptance suite.

ModelInputs build_inputs(const HeterogeneousGraph& g, const std::string& target_type,
                         const std::vector<MetaPathSpec>& meta_paths);

struct LabelSet {
  NodeLabels labels;  ///< per local index, -1 when unlabeled
  std::size_t num_classes = 0;
};
LabelSet target_labels(const HeterogeneousGraph& g, const ModelInputs& inputs);

struct Split {
  std::vector<std::size_t> train, val, test;  ///< local indices, ascending
};
/// 60/20/20 by a seeded hash of each labeled node's id.
Split split_nodes(const ModelInputs& inputs, const NodeLabels& labels, std::uint64_t seed);

std::vector<int> majority_baseline(const NodeLabels& labels, std::span<const std::size_t> train,
                                   std::span<const std::size_t> eval);

/// Multinomial logistic regression on standardized per-edge-type degrees.
std::vector<int> degree_logistic_baseline(const HeterogeneousGraph& g, const ModelInputs& inputs,
                                          const LabelSet& labels, std::span<const std::size_t> train,
                                          std::span<const std::size_t> eval);

struct ClassificationReport {
  F1Scores ahine, majority, logistic;
  TrainResult model;
};
ClassificationReport classify(const HeterogeneousGraph& g, const ModelInputs& inputs, const LabelSet& labels,
                              const Split& split, const Hyperparams& hp);

struct TeamRun {
  PrefilterResult filtered;
  ForwardState state;
  InfluenceScores influence;
  TeamPartition partition;  ///< ids of the filtered graph
};
TeamRun run_teams(const HeterogeneousGraph& g, const std::string& target_type,
                  const std::vector<MetaPathSpec>& meta_paths, const Hyperparams& hp, const IdentificationConfig& cfg);

/// Maps a partition over filtered ids back to original ids.
TeamPartition to_original_ids(const TeamPartition& p, const PrefilterResult& filtered);

/// Ground truth restricted to the nodes the partition covers.
std::map<NodeId, int> restrict_truth(const std::map<NodeId, int>& truth, const TeamPartition& p);

}  // namespace hinforge
