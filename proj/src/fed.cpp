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

#include "hinforge/fed.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <ostream>
#include <set>

#include "hinforge/error.hpp"
#include "hinforge/format.hpp"
#include "hinforge/metrics.hpp"

namespace hinforge {

std::vector<double> staleness_coefficients(std::span<const std::uint64_t> gaps, double alpha) {
  std::vector<double> raw;
  raw.reserve(gaps.size());
  double total = 0.0;
  for (auto gap : gaps) {
    raw.push_back(std::pow(static_cast<double>(gap) + 1.0, -alpha));
    total += raw.back();
  }
  for (double& c : raw) c /= total;
  return raw;
}

ServerState::ServerState(std::size_t workers, std::size_t parameter_count, double alpha, std::uint64_t threshold)
    : parameter_count_(parameter_count),
      alpha_(alpha),
      threshold_(threshold),
      server_w_(workers),
      server_ver_(workers) {
  if (workers == 0) raise(ErrorCode::InvalidPartition, "at least one worker is required");
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) raise(ErrorCode::ConfigError, "alpha must be finite and >= 0");
}

void ServerState::submit_update(const ClientUpdate& update) {
  if (update.worker_id >= server_w_.size()) raise(ErrorCode::UnknownWorker, "worker " + std::to_string(update.worker_id));
  if (update.parameters.size() != parameter_count_) {
    raise(ErrorCode::ShapeMismatch, "update of " + std::to_string(update.parameters.size()) + " values, expected " +
                                        std::to_string(parameter_count_));
  }
  server_w_[update.worker_id] = update.parameters;
  server_ver_[update.worker_id] = version_latest_;
  if (std::find(pending_submitters_.begin(), pending_submitters_.end(), update.worker_id) == pending_submitters_.end()) {
    pending_submitters_.push_back(update.worker_id);
  }
}

bool ServerState::all_submitted() const {
  return std::all_of(server_ver_.begin(), server_ver_.end(), [](const auto& v) { return v.has_value(); });
}

std::vector<double> ServerState::coefficients() const {
  std::vector<std::uint64_t> gaps;
  for (std::size_t i = 0; i < server_ver_.size(); ++i) {
    if (!server_ver_[i]) raise(ErrorCode::MissingWorkerUpdate, "worker " + std::to_string(i) + " never submitted");
    gaps.push_back(version_latest_ - *server_ver_[i]);
  }
  return staleness_coefficients(gaps, alpha_);
}

AggregateResult ServerState::aggregate() {
  std::vector<std::uint64_t> gaps;
  for (std::size_t i = 0; i < server_ver_.size(); ++i) {
    if (!server_ver_[i]) raise(ErrorCode::MissingWorkerUpdate, "worker " + std::to_string(i) + " never submitted");
    gaps.push_back(version_latest_ - *server_ver_[i]);
  }
  // Weighted sum first, then normalization, in ascending worker order.
  std::vector<double> sum(parameter_count_, 0.0);
  double total = 0.0;
  for (std::size_t i = 0; i < server_w_.size(); ++i) {
    const double w = std::pow(static_cast<double>(gaps[i]) + 1.0, -alpha_);
    total += w;
    for (std::size_t p = 0; p < parameter_count_; ++p) sum[p] += w * server_w_[i][p];
  }
  for (double& v : sum) v /= total;
  last_gaps_ = std::move(gaps);
  last_submitters_ = std::move(pending_submitters_);
  pending_submitters_.clear();
  std::sort(last_submitters_.begin(), last_submitters_.end());
  ++version_latest_;
  return {std::move(sum), version_latest_};
}

SyncDecision ServerState::post_aggregate_sync() const {
  SyncDecision d;
  const std::uint64_t max_gap = last_gaps_.empty() ? 0 : *std::max_element(last_gaps_.begin(), last_gaps_.end());
  if (max_gap > threshold_) {
    d.kind = SyncDecision::Kind::BroadcastAll;
    for (std::size_t i = 0; i < server_w_.size(); ++i) d.recipients.push_back(i);
  } else {
    d.kind = SyncDecision::Kind::SendToSubmitter;
    d.recipients = last_submitters_;
  }
  return d;
}

std::vector<WorkerProfile> hash_partition(const ModelInputs& inputs, std::span<const std::size_t> train_nodes,
                                          std::size_t clients, const Hyperparams& hp) {
  if (clients == 0) raise(ErrorCode::InvalidPartition, "client count must be >= 1");
  std::vector<WorkerProfile> out(clients);
  for (std::size_t w = 0; w < clients; ++w) {
    out[w].worker_id = w;
    out[w].hp = hp;
  }
  for (std::size_t i : train_nodes) out[splitmix64(inputs.node(i)) % clients].train_nodes.push_back(i);
  return out;
}

void validate_partition(std::span<const WorkerProfile> profiles, std::span<const std::size_t> expected) {
  if (profiles.empty()) raise(ErrorCode::InvalidPartition, "no workers");
  std::set<std::size_t> ids, seen;
  for (const auto& p : profiles) {
    if (p.worker_id >= profiles.size() || !ids.insert(p.worker_id).second) {
      raise(ErrorCode::InvalidPartition, "worker ids must be 0..C-1 without repeats");
    }
    if (p.train_nodes.empty()) raise(ErrorCode::InvalidPartition, "worker " + std::to_string(p.worker_id) + " has no nodes");
    if (p.period < 1) raise(ErrorCode::InvalidPartition, "worker period must be >= 1");
    for (std::size_t v : p.train_nodes) {
      if (!seen.insert(v).second) raise(ErrorCode::InvalidPartition, "node at local index " + std::to_string(v) + " appears twice");
    }
  }
  if (!expected.empty() && seen != std::set<std::size_t>(expected.begin(), expected.end())) {
    raise(ErrorCode::InvalidPartition, "partitions do not cover the labeled training set");
  }
}

namespace {

double validation_f1(const ModelInputs& inputs, const ModelParams& params, const NodeLabels& labels,
                     std::span<const std::size_t> val_nodes) {
  if (val_nodes.empty()) return 0.0;
  const auto predicted = predict(infer(inputs, params));
  std::vector<int> pred, truth;
  for (std::size_t i : val_nodes) {
    pred.push_back(predicted[i]);
    truth.push_back(labels[i]);
  }
  return f1_scores(pred, truth).micro;
}

std::string join_ids(const std::vector<std::size_t>& ids) {
  std::string out;
  for (std::size_t k = 0; k < ids.size(); ++k) out += (k ? "," : "") + std::to_string(ids[k]);
  return out;
}

}  // namespace

SimulationResult run_simulation(const ModelInputs& inputs, const NodeLabels& labels, std::size_t num_classes,
                                std::span<const WorkerProfile> profiles_in, const SimulationConfig& cfg,
                                const ModelParams& initial, std::span<const std::size_t> loss_nodes,
                                std::span<const std::size_t> val_nodes) {
  validate_partition(profiles_in);
  if (cfg.rounds < 1) raise(ErrorCode::ConfigError, "rounds must be >= 1");
  std::vector<WorkerProfile> profiles(profiles_in.begin(), profiles_in.end());
  std::sort(profiles.begin(), profiles.end(), [](const auto& a, const auto& b) { return a.worker_id < b.worker_id; });
  for (const auto& p : profiles) validate_training_split(p.train_nodes, labels, num_classes, p.hp);

  const std::size_t C = profiles.size();
  std::vector<Trainer> trainers;
  trainers.reserve(C);
  for (const auto& p : profiles) trainers.emplace_back(inputs, initial, p.hp, p.train_nodes, labels, p.worker_id);

  ServerState server(C, initial.parameter_count(), cfg.alpha, cfg.threshold);
  SimulationResult result;
  result.global = initial;
  result.global.set_requires_grad(false);

  auto deliver = [&](const AggregateResult& agg) {
    result.global.assign(agg.parameters);
    const auto decision = server.post_aggregate_sync();
    for (std::size_t w : decision.recipients) trainers[w].params().assign(agg.parameters);
    return decision.kind == SyncDecision::Kind::BroadcastAll ? std::string("broadcast") : std::string("send");
  };

  for (std::size_t r = 0; r < cfg.rounds; ++r) {
    std::vector<std::size_t> active;
    for (std::size_t w = 0; w < C; ++w) {
      if (r % profiles[w].period == 0) active.push_back(w);
    }

    // Workers share only the read-only inputs; each trainer is its own context.
    std::vector<std::future<void>> jobs;
    for (std::size_t w : active) {
      jobs.push_back(std::async(std::launch::async, [&, w] { trainers[w].run_epochs(profiles[w].hp.local_epochs); }));
    }
    for (auto& j : jobs) j.get();

    std::vector<std::string> events;
    if (cfg.asynchronous) {
      for (std::size_t w : active) {
        server.submit_update({w, trainers[w].params().flatten(), server.version_latest()});
        if (server.all_submitted()) {
          events.push_back(std::to_string(w) + ":" + deliver(server.aggregate()));
        } else {
          events.push_back(std::to_string(w) + ":pending");
        }
      }
    } else {
      for (std::size_t w : active) server.submit_update({w, trainers[w].params().flatten(), server.version_latest()});
      if (server.all_submitted()) {
        events.push_back(join_ids(active) + ":" + deliver(server.aggregate()));
      } else {
        events.push_back(join_ids(active) + ":pending");
      }
    }

    RoundMetrics m;
    m.round = r;
    for (std::size_t k = 0; k < events.size(); ++k) m.worker_events += (k ? ";" : "") + events[k];
    Rng unused(0);
    m.global_loss = loss_nodes.empty() ? 0.0 : loss(inputs, result.global, loss_nodes, labels, kAllNeighbors, unused);
    m.val_micro_f1 = validation_f1(inputs, result.global, labels, val_nodes);
    result.rounds.push_back(std::move(m));
  }
  for (const auto& t : trainers) result.worker_loss_curves.push_back(t.loss_curve());
  result.final_version = server.version_latest();
  return result;
}

void write_round_metrics(const std::vector<RoundMetrics>& rounds, std::ostream& out) {
  out << "round\tworker_events\tglobal_loss\tval_micro_f1\n";
  for (const auto& r : rounds) {
    out << r.round << '\t' << r.worker_events << '\t' << format_double(r.global_loss) << '\t'
        << format_double(r.val_micro_f1) << '\n';
  }
}

}  // namespace hinforge
