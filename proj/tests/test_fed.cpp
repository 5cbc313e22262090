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

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <sstream>

#include "hinforge/error.hpp"
#include "hinforge/fed.hpp"
#include "hinforge/pipeline.hpp"
#include "oracles.hpp"

using namespace hinforge;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorCode::ConfigError;
}

struct Fixture {
  HeterogeneousGraph g = oracle::random_academic_graph(18, 20, 3, 21);
  ModelInputs inputs = build_inputs(g, "author", {{{"author", "paper", "author"}, {}},
                                                   {{"author", "paper", "venue", "paper", "author"}, {}}});
  LabelSet labels = target_labels(g, inputs);
  std::vector<std::size_t> all = [this] {
    std::vector<std::size_t> v(inputs.num_nodes());
    std::iota(v.begin(), v.end(), 0);
    return v;
  }();
  Hyperparams hp = [] {
    Hyperparams h;
    h.embedding_dim = 6;
    h.semantic_dim = 3;
    h.batch_size = 4;
    h.neighbor_samples = 3;
    h.local_epochs = 2;
    h.seed = 77;
    return h;
  }();
  ModelParams initial() const {
    return ModelParams::initialize(inputs.num_nodes(), inputs.num_meta_paths(), labels.num_classes, hp);
  }
};

}  // namespace

TEST(Server, FirstSubmitIsCreditedAtVersionOne) {
  ServerState s(2, 3);
  s.submit_update({0, {1, 2, 3}, 1});
  EXPECT_EQ(s.version_of(0), 1u);
  EXPECT_FALSE(s.version_of(1).has_value());
  EXPECT_EQ(s.weights_of(0), (std::vector<double>{1, 2, 3}));
}

TEST(Server, ResubmitOverwrites) {
  ServerState s(1, 2);
  s.submit_update({0, {1, 1}, 1});
  s.submit_update({0, {5, -2}, 1});
  EXPECT_EQ(s.weights_of(0), (std::vector<double>{5, -2}));
}

TEST(Server, WrongLengthLeavesStateUnchanged) {
  ServerState s(2, 2);
  s.submit_update({0, {1, 1}, 1});
  EXPECT_EQ(code_of([&] { s.submit_update({0, {1, 2, 3}, 1}); }), ErrorCode::ShapeMismatch);
  EXPECT_EQ(s.weights_of(0), (std::vector<double>{1, 1}));
  EXPECT_EQ(code_of([&] { s.submit_update({7, {1, 2}, 1}); }), ErrorCode::UnknownWorker);
}

TEST(Server, AggregateNeedsEveryWorker) {
  ServerState s(3, 1);
  s.submit_update({0, {1}, 1});
  EXPECT_EQ(code_of([&] { s.aggregate(); }), ErrorCode::MissingWorkerUpdate);
}

TEST(Server, ZeroGapIsArithmeticMean) {
  for (double alpha : {0.0, 0.5, 1.0, 3.0}) {
    ServerState s(3, 2, alpha);
    s.submit_update({0, {1.0, 0.1}, 1});
    s.submit_update({1, {2.0, 0.7}, 1});
    s.submit_update({2, {6.0, -0.2}, 1});
    const auto r = s.aggregate();
    EXPECT_NEAR(r.parameters[0], 3.0, 1e-12);
    EXPECT_NEAR(r.parameters[1], 0.2, 1e-12);
    EXPECT_EQ(r.version, 2u);
  }
}

TEST(Server, StalenessWeightsTwoThirdsOneThird) {
  ServerState s(2, 1, 1.0);
  s.submit_update({0, {0.0}, 1});
  s.submit_update({1, {3.0}, 1});
  s.aggregate();
  s.submit_update({0, {6.0}, 2});  // worker 1 is now one version behind
  const auto c = s.coefficients();
  EXPECT_NEAR(c[0], 2.0 / 3.0, 1e-12);
  EXPECT_NEAR(c[1], 1.0 / 3.0, 1e-12);
  EXPECT_NEAR(s.aggregate().parameters[0], 2.0 / 3.0 * 6.0 + 1.0 / 3.0 * 3.0, 1e-12);
}

TEST(Server, AlphaZeroIgnoresStaleness) {
  const std::vector<std::uint64_t> gaps{0, 3, 10, 100};
  for (double c : staleness_coefficients(gaps, 0.0)) EXPECT_NEAR(c, 0.25, 1e-15);
}

TEST(Server, CoefficientProperties) {
  Rng rng = make_rng(1, "gaps");
  for (int k = 0; k < 2000; ++k) {
    const std::size_t n = 1 + uniform_index(rng, 8);
    std::vector<std::uint64_t> gaps(n);
    for (auto& g : gaps) g = uniform_index(rng, 50);
    const double alpha = uniform(rng, 0.0, 4.0);
    const auto c = staleness_coefficients(gaps, alpha);
    double total = 0.0;
    for (double v : c) {
      EXPECT_GT(v, 0.0);
      total += v;
    }
    EXPECT_NEAR(total, 1.0, 1e-12);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (gaps[i] == gaps[j]) EXPECT_EQ(c[i], c[j]);
        if (alpha > 0 && gaps[i] > gaps[j]) EXPECT_LT(c[i], c[j]);
      }
    }
  }
}

TEST(Server, VersionCountsAggregations) {
  ServerState s(2, 1);
  s.submit_update({0, {1}, 1});
  s.submit_update({1, {1}, 1});
  for (std::uint64_t r = 1; r <= 25; ++r) {
    s.submit_update({r % 2, {double(r)}, s.version_latest()});
    EXPECT_EQ(s.aggregate().version, 1 + r);
    for (std::size_t w = 0; w < 2; ++w) EXPECT_LE(*s.version_of(w), s.version_latest());
  }
  EXPECT_EQ(s.version_latest(), 26u);
}

TEST(Server, ThresholdIsStrict) {
  // Worker 1 submits once at version 1; worker 0 keeps aggregating.
  ServerState s(2, 1, 0.5, 4);
  s.submit_update({1, {0.0}, 1});
  std::vector<std::uint64_t> max_gap;
  std::vector<SyncDecision::Kind> kinds;
  for (int r = 0; r < 6; ++r) {
    s.submit_update({0, {1.0}, s.version_latest()});
    const std::uint64_t gap = s.version_latest() - *s.version_of(1);
    s.aggregate();
    max_gap.push_back(gap);
    kinds.push_back(s.post_aggregate_sync().kind);
  }
  ASSERT_EQ(max_gap[4], 4u);
  EXPECT_EQ(kinds[4], SyncDecision::Kind::SendToSubmitter);
  ASSERT_EQ(max_gap[5], 5u);
  EXPECT_EQ(kinds[5], SyncDecision::Kind::BroadcastAll);
  EXPECT_EQ(s.post_aggregate_sync().recipients, (std::vector<std::size_t>{0, 1}));
}

TEST(Server, BelowThresholdSendsToSubmitterOnly) {
  ServerState s(3, 1, 0.5, 4);
  for (std::size_t w = 0; w < 3; ++w) s.submit_update({w, {1.0}, 1});
  s.aggregate();
  s.submit_update({2, {1.0}, 2});
  s.aggregate();
  const auto d = s.post_aggregate_sync();
  EXPECT_EQ(d.kind, SyncDecision::Kind::SendToSubmitter);
  EXPECT_EQ(d.recipients, std::vector<std::size_t>{2});
}

TEST(Server, SingleWorkerNeverBroadcasts) {
  ServerState s(1, 1, 0.5, 0);
  for (int r = 0; r < 10; ++r) {
    s.submit_update({0, {1.0}, s.version_latest()});
    s.aggregate();
    EXPECT_EQ(s.post_aggregate_sync().kind, SyncDecision::Kind::SendToSubmitter);
  }
}

TEST(Server, PermutationInvariantAcrossSubmissionOrder) {
  const std::vector<std::vector<double>> w{{0.1, 2.0}, {-3.0, 0.5}, {7.25, 1e-3}};
  ServerState a(3, 2, 0.7), b(3, 2, 0.7);
  for (std::size_t k : {0u, 1u, 2u}) a.submit_update({k, w[k], 1});
  for (std::size_t k : {2u, 0u, 1u}) b.submit_update({k, w[k], 1});
  EXPECT_EQ(a.aggregate().parameters, b.aggregate().parameters);
}

TEST(Partition, HashPartitionIsDisjointAndCovering) {
  Fixture f;
  const auto profiles = hash_partition(f.inputs, f.all, 3, f.hp);
  EXPECT_NO_THROW(validate_partition(profiles, f.all));
  std::size_t total = 0;
  for (const auto& p : profiles) total += p.train_nodes.size();
  EXPECT_EQ(total, f.all.size());
}

TEST(Partition, InvalidPartitions) {
  Fixture f;
  auto profiles = hash_partition(f.inputs, f.all, 2, f.hp);
  auto overlap = profiles;
  overlap[1].train_nodes.push_back(overlap[0].train_nodes.front());
  EXPECT_EQ(code_of([&] { validate_partition(overlap); }), ErrorCode::InvalidPartition);
  auto empty = profiles;
  empty[0].train_nodes.clear();
  EXPECT_EQ(code_of([&] { validate_partition(empty); }), ErrorCode::InvalidPartition);
  const std::vector<std::size_t> missing(f.all.begin(), f.all.end() - 1);
  EXPECT_EQ(code_of([&] { validate_partition(profiles, missing); }), ErrorCode::InvalidPartition);
}

TEST(Simulation, SingleClientMatchesCentralizedTraining) {
  Fixture f;
  const std::size_t rounds = 4;
  WorkerProfile p;
  p.worker_id = 0;
  p.train_nodes = f.all;
  p.hp = f.hp;
  SimulationConfig cfg;
  cfg.rounds = rounds;
  const std::vector<WorkerProfile> profiles{p};
  const auto sim = run_simulation(f.inputs, f.labels.labels, f.labels.num_classes, profiles, cfg, f.initial(), {}, {});

  auto hp = f.hp;
  hp.local_epochs = f.hp.local_epochs * rounds;
  const auto central = train(f.inputs, f.labels.labels, f.all, f.labels.num_classes, hp);
  EXPECT_EQ(sim.global.flatten(), central.params.flatten());
  EXPECT_EQ(sim.worker_loss_curves.at(0), central.loss_curve);
  EXPECT_EQ(sim.final_version, 1 + rounds);
}

TEST(Simulation, DeterministicTraces) {
  Fixture f;
  auto profiles = hash_partition(f.inputs, f.all, 3, f.hp);
  profiles[2].period = 2;
  SimulationConfig cfg;
  cfg.rounds = 5;
  cfg.alpha = 1.0;
  std::vector<std::size_t> val(f.all.begin(), f.all.begin() + 5);
  const auto a = run_simulation(f.inputs, f.labels.labels, f.labels.num_classes, profiles, cfg, f.initial(), f.all, val);
  const auto b = run_simulation(f.inputs, f.labels.labels, f.labels.num_classes, profiles, cfg, f.initial(), f.all, val);
  std::ostringstream sa, sb;
  write_round_metrics(a.rounds, sa);
  write_round_metrics(b.rounds, sb);
  EXPECT_EQ(sa.str(), sb.str());
  EXPECT_EQ(a.global.flatten(), b.global.flatten());
  EXPECT_EQ(a.rounds.size(), 5u);
  EXPECT_EQ(a.final_version, 6u);
}

TEST(Simulation, AsynchronousModeAggregatesPerArrival) {
  Fixture f;
  const auto profiles = hash_partition(f.inputs, f.all, 3, f.hp);
  SimulationConfig cfg;
  cfg.rounds = 3;
  cfg.asynchronous = true;
  const auto r = run_simulation(f.inputs, f.labels.labels, f.labels.num_classes, profiles, cfg, f.initial(), {}, {});
  // Round 0: two pending arrivals then one aggregation; rounds 1-2: three each.
  EXPECT_EQ(r.final_version, 1u + 1u + 3u + 3u);
  EXPECT_EQ(r.rounds[0].worker_events, "0:pending;1:pending;2:send");
}
