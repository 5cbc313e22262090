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
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hinforge/model.hpp"

namespace hinforge {

struct ClientUpdate {
  std::size_t worker_id = 0;
  std::vector<double> parameters;
  std::uint64_t trained_from_version = 1;
};

struct SyncDecision {
  enum class Kind { BroadcastAll, SendToSubmitter };
  Kind kind = Kind::SendToSubmitter;
  /// Workers that receive the aggregated parameters.
  std::vector<std::size_t> recipients;
};

struct AggregateResult {
  std::vector<double> parameters;
  std::uint64_t version = 1;  ///< version_latest after the increment
};

/// Staleness-weighted parameter server. Every worker owns one slot in the
/// weight record and one in the version record; an aggregation weights slot i
/// by (version_latest - ver[i] + 1)^-alpha and normalizes.
class ServerState {
 public:
  ServerState(std::size_t workers, std::size_t parameter_count, double alpha = 0.5, std::uint64_t threshold = 4);

  /// Overwrites the worker's slot and credits it at the current version.
  void submit_update(const ClientUpdate& update);

  /// Normalized coefficients for the current version record, worker-id order.
  std::vector<double> coefficients() const;

  AggregateResult aggregate();

  /// Broadcast iff the largest gap entering the last aggregation exceeds the
  /// threshold (strictly); otherwise only the workers that submitted since
  /// the previous aggregation receive the result.
  SyncDecision post_aggregate_sync() const;

  std::uint64_t version_latest() const noexcept { return version_latest_; }
  std::optional<std::uint64_t> version_of(std::size_t worker) const { return server_ver_.at(worker); }
  const std::vector<double>& weights_of(std::size_t worker) const { return server_w_.at(worker); }
  std::size_t workers() const noexcept { return server_w_.size(); }
  std::size_t parameter_count() const noexcept { return parameter_count_; }
  double alpha() const noexcept { return alpha_; }
  std::uint64_t threshold() const noexcept { return threshold_; }
  bool all_submitted() const;

 private:
  std::size_t parameter_count_;
  double alpha_;
  std::uint64_t threshold_;
  std::uint64_t version_latest_ = 1;
  std::vector<std::vector<double>> server_w_;
  std::vector<std::optional<std::uint64_t>> server_ver_;
  std::vector<std::uint64_t> last_gaps_;
  std::vector<std::size_t> pending_submitters_;
  std::vector<std::size_t> last_submitters_;
};

/// Normalized staleness weights for a gap vector.
std::vector<double> staleness_coefficients(std::span<const std::uint64_t> gaps, double alpha);

struct WorkerProfile {
  std::size_t worker_id = 0;
  std::vector<std::size_t> train_nodes;  ///< local indices
  /// The worker takes part in every `period`-th round (1 = every round).
  std::size_t period = 1;
  Hyperparams hp;
};

struct SimulationConfig {
  std::size_t rounds = 10;
  double alpha = 0.5;
  std::uint64_t threshold = 4;
  /// Aggregate on every arrival instead of once per round.
  bool asynchronous = false;
};

struct RoundMetrics {
  std::size_t round = 0;
  std::string worker_events;
  double global_loss = 0.0;
  double val_micro_f1 = 0.0;
};

struct SimulationResult {
  ModelParams global;
  std::vector<RoundMetrics> rounds;
  std::vector<std::vector<double>> worker_loss_curves;
  std::uint64_t final_version = 1;
};

/// Splits labeled nodes into `clients` buckets by a hash of the global node id.
std::vector<WorkerProfile> hash_partition(const ModelInputs& inputs, std::span<const std::size_t> train_nodes,
                                          std::size_t clients, const Hyperparams& hp);

/// Throws InvalidPartition unless worker ids are 0..C-1, partitions are
/// non-empty and disjoint, and (when given) their union equals `expected`.
void validate_partition(std::span<const WorkerProfile> profiles, std::span<const std::size_t> expected = {});

SimulationResult run_simulation(const ModelInputs& inputs, const NodeLabels& labels, std::size_t num_classes,
                                std::span<const WorkerProfile> profiles, const SimulationConfig& cfg,
                                const ModelParams& initial, std::span<const std::size_t> loss_nodes,
                                std::span<const std::size_t> val_nodes);

void write_round_metrics(const std::vector<RoundMetrics>& rounds, std::ostream& out);

}  // namespace hinforge
