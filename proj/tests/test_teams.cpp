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

#include <numeric>
#include <set>

#include "hinforge/error.hpp"
#include "hinforge/metrics.hpp"
#include "hinforge/pipeline.hpp"
#include "hinforge/synthetic.hpp"
#include "hinforge/teams.hpp"
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

IdentificationConfig loose() {
  IdentificationConfig cfg;
  cfg.min_publications = 0;
  cfg.min_coauthor_frequency = 0;
  return cfg;
}

// Random inputs for identify_teams with n nodes on ids 100, 101, ...
struct RandomCase {
  EmbeddingTable table;
  InfluenceScores influence;
  AttentionTable attention;
  std::vector<std::vector<std::size_t>> neighbors;
};

RandomCase random_case(std::size_t n, Rng& rng) {
  RandomCase c;
  c.table.dim = 3;
  c.attention.resize(2, std::vector<std::vector<std::pair<std::size_t, double>>>(n));
  c.neighbors.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    c.table.nodes.push_back(static_cast<NodeId>(100 + i));
    c.table.fused.push_back({uniform(rng, -1, 1), uniform(rng, -1, 1), uniform(rng, -1, 1)});
    c.influence.nodes.push_back(static_cast<NodeId>(100 + i));
    // coarse scores so ties happen
    c.influence.scores.push_back(static_cast<double>(uniform_index(rng, 4)));
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (uniform01(rng) < 0.25) {
        c.neighbors[i].push_back(j);
        c.neighbors[j].push_back(i);
      }
    }
  }
  for (std::size_t m = 0; m < 2; ++m) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j : c.neighbors[i]) c.attention[m][i].emplace_back(j, uniform01(rng));
    }
  }
  return c;
}

}  // namespace

TEST(Prefilter, DropsAuthorsBelowThreshold) {
  RawGraph raw;
  raw.add_node(0, "author");
  raw.add_node(1, "author");
  for (NodeId p = 2; p < 14; ++p) {
    raw.add_node(p, "paper");
    raw.add_edge(0, p, "writes");
    if (p < 5) raw.add_edge(1, p, "writes");
  }
  const auto g = freeze_graph(raw);
  IdentificationConfig cfg;
  const auto r = prefilter_graph(g, cfg);
  EXPECT_FALSE(r.old_to_new[1].has_value());
  ASSERT_TRUE(r.old_to_new[0].has_value());
  EXPECT_EQ(r.graph.num_nodes(), 13u);
  EXPECT_TRUE(r.coauthors[*r.old_to_new[0]].empty());
}

TEST(Prefilter, ZeroThresholdsKeepEverything) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto g = oracle::random_academic_graph(9, 7, 2, seed);
    const auto r = prefilter_graph(g, loose());
    EXPECT_EQ(r.graph, g);
    for (NodeId v = 0; v < g.num_nodes(); ++v) EXPECT_EQ(r.old_to_new[v], v);
  }
}

TEST(Prefilter, RetainedSetMatchesPublicationCounts) {
  PlantedConfig pc;
  pc.seed = 4;
  const auto planted = gen_synthetic(pc);
  const auto& g = planted.graph;
  IdentificationConfig cfg;
  cfg.min_publications = 12;
  const auto writes = g.require_edge_type("writes");
  std::vector<NodeId> expected;
  for (NodeId a : planted.authors) {
    if (g.degree(a, writes) >= 12) expected.push_back(a);
  }
  const auto r = prefilter_graph(g, cfg);
  std::vector<NodeId> kept;
  for (NodeId v : r.new_to_old) {
    if (g.node_type(v) == g.require_node_type("author")) kept.push_back(v);
  }
  EXPECT_EQ(kept, expected);
  EXPECT_GT(expected.size(), 0u);
  EXPECT_LT(expected.size(), planted.authors.size());
}

TEST(Prefilter, CoauthorFrequency) {
  RawGraph raw;
  for (NodeId a = 0; a < 3; ++a) raw.add_node(a, "author");
  for (NodeId p = 3; p < 9; ++p) {
    raw.add_node(p, "paper");
    raw.add_edge(0, p, "writes");
    raw.add_edge(1, p, "writes");
  }
  raw.add_edge(2, 3, "writes");
  const auto g = freeze_graph(raw);
  auto cfg = loose();
  cfg.min_coauthor_frequency = 5;
  const auto r = prefilter_graph(g, cfg);
  EXPECT_EQ(r.coauthors[0], std::vector<NodeId>{1});
  EXPECT_TRUE(r.coauthors[2].empty());
}

TEST(Prefilter, EmptyAfterFilter) {
  const auto g = oracle::random_academic_graph(5, 4, 1, 0);
  IdentificationConfig cfg;
  cfg.min_publications = 1000;
  EXPECT_EQ(code_of([&] { prefilter_graph(g, cfg); }), ErrorCode::EmptyAfterFilter);
}

TEST(Identify, SingleNode) {
  EmbeddingTable t;
  t.nodes = {7};
  t.dim = 2;
  t.fused = {{1.0, 0.0}};
  InfluenceScores s;
  s.nodes = {7};
  s.scores = {0.0};
  const AttentionTable att(1, std::vector<std::vector<std::pair<std::size_t, double>>>(1));
  const std::vector<std::vector<std::size_t>> nb(1);
  const auto p = identify_teams(t, s, att, nb, IdentificationConfig{});
  ASSERT_EQ(p.teams.size(), 1u);
  EXPECT_EQ(p.teams[0].leader, 7u);
  EXPECT_TRUE(p.teams[0].core.empty());
  EXPECT_TRUE(p.teams[0].non_core.empty());
  EXPECT_TRUE(p.residual.empty());

  IdentificationConfig residual;
  residual.keep_residual = true;
  const auto q = identify_teams(t, s, att, nb, residual);
  EXPECT_TRUE(q.teams.empty());
  EXPECT_EQ(q.residual, std::vector<NodeId>{7});
}

TEST(Identify, ZeroKIsAConfigError) {
  Rng rng = make_rng(1, "k");
  auto c = random_case(5, rng);
  IdentificationConfig cfg;
  cfg.similar_k = 0;
  EXPECT_EQ(code_of([&] { identify_teams(c.table, c.influence, c.attention, c.neighbors, cfg); }),
            ErrorCode::ConfigError);
  cfg.similar_k = 3;
  cfg.influential_k = 0;
  EXPECT_EQ(code_of([&] { identify_teams(c.table, c.influence, c.attention, c.neighbors, cfg); }),
            ErrorCode::ConfigError);
}

TEST(Identify, MissingInputs) {
  Rng rng = make_rng(2, "k");
  auto c = random_case(5, rng);
  auto no_score = c.influence;
  no_score.nodes.pop_back();
  no_score.scores.pop_back();
  EXPECT_EQ(code_of([&] { identify_teams(c.table, no_score, c.attention, c.neighbors, {}); }),
            ErrorCode::MissingInfluence);
  auto no_embedding = c.table;
  no_embedding.fused[2].clear();
  EXPECT_EQ(code_of([&] { identify_teams(no_embedding, c.influence, c.attention, c.neighbors, {}); }),
            ErrorCode::MissingEmbedding);
}

TEST(Identify, LeaderCoreAndNonCore) {
  // Leader 0 (highest influence). Neighbors 1, 2, 3. Node 4 is not a neighbor
  // but is the most similar; node 3 is similar but receives little attention.
  EmbeddingTable t;
  t.nodes = {0, 1, 2, 3, 4};
  t.dim = 2;
  t.fused = {{1, 0}, {0.9, 0.1}, {-1, 0.2}, {0.95, 0.05}, {1, 0.001}};
  InfluenceScores s;
  s.nodes = t.nodes;
  s.scores = {0.9, 0.1, 0.2, 0.3, 0.0};
  AttentionTable att(1, std::vector<std::vector<std::pair<std::size_t, double>>>(5));
  att[0][0] = {{1, 0.5}, {2, 0.4}, {3, 0.1}};
  std::vector<std::vector<std::size_t>> nb{{1, 2, 3}, {0}, {0}, {0}, {}};
  IdentificationConfig cfg;
  cfg.similar_k = 3;   // 4, 3, 1
  cfg.influential_k = 2;  // 1, 2
  const auto p = identify_teams(t, s, att, nb, cfg);
  ASSERT_EQ(p.teams.size(), 2u);
  EXPECT_EQ(p.teams[0].leader, 0u);
  EXPECT_EQ(p.teams[0].core, std::vector<NodeId>{1});
  EXPECT_EQ(p.teams[0].non_core, (std::vector<NodeId>{2, 3}));
  EXPECT_EQ(p.teams[1].leader, 4u);
}

TEST(Identify, PartitionInvariantsOnRandomInputs) {
  Rng rng = make_rng(3, "inv");
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + uniform_index(rng, 30);
    auto c = random_case(n, rng);
    IdentificationConfig cfg;
    cfg.similar_k = 1 + uniform_index(rng, 6);
    cfg.influential_k = 1 + uniform_index(rng, 6);
    cfg.keep_residual = uniform01(rng) < 0.5;
    const auto p = identify_teams(c.table, c.influence, c.attention, c.neighbors, cfg);
    std::multiset<NodeId> seen;
    for (const auto& team : p.teams) {
      std::set<NodeId> core(team.core.begin(), team.core.end());
      EXPECT_FALSE(core.count(team.leader));
      for (NodeId v : team.non_core) {
        EXPECT_FALSE(core.count(v));
        EXPECT_NE(v, team.leader);
      }
      for (NodeId v : team.members()) seen.insert(v);
    }
    for (NodeId v : p.residual) seen.insert(v);
    EXPECT_EQ(seen, std::multiset<NodeId>(c.table.nodes.begin(), c.table.nodes.end()));
    EXPECT_LE(p.teams.size(), n);
    // deterministic
    const auto again = identify_teams(c.table, c.influence, c.attention, c.neighbors, cfg);
    ASSERT_EQ(again.teams.size(), p.teams.size());
    for (std::size_t t = 0; t < p.teams.size(); ++t) EXPECT_EQ(again.teams[t].members(), p.teams[t].members());
    EXPECT_NO_THROW(p.clusters(c.table.nodes));
  }
}

TEST(Identify, MaxTeamsLeavesResidual) {
  Rng rng = make_rng(4, "max");
  auto c = random_case(20, rng);
  IdentificationConfig cfg;
  cfg.max_teams = 2;
  const auto p = identify_teams(c.table, c.influence, c.attention, c.neighbors, cfg);
  EXPECT_EQ(p.teams.size(), 2u);
  std::size_t covered = p.residual.size();
  for (const auto& t : p.teams) covered += t.size();
  EXPECT_EQ(covered, 20u);
}

TEST(Identify, TwoDisjointCliquesAfterTraining) {
  RawGraph raw;
  const std::vector<std::vector<NodeId>> cliques{{0, 1, 2, 3}, {4, 5, 6}};
  for (std::size_t c = 0; c < 2; ++c) {
    for (NodeId a : cliques[c]) raw.add_node(a, "author", "c" + std::to_string(c));
  }
  NodeId next = 7;
  for (const auto& clique : cliques) {
    for (std::size_t x = 0; x < clique.size(); ++x) {
      for (std::size_t y = x + 1; y < clique.size(); ++y) {
        raw.add_node(next, "paper");
        raw.add_edge(clique[x], next, "writes");
        raw.add_edge(clique[y], next, "writes");
        ++next;
      }
    }
  }
  const auto g = freeze_graph(raw);
  const std::vector<MetaPathSpec> apa{{{"author", "paper", "author"}, {}}};
  Hyperparams hp;
  hp.local_epochs = 20;
  hp.seed = 5;
  const auto run = run_teams(g, "author", apa, hp, loose());
  ASSERT_EQ(run.partition.teams.size(), 2u);
  std::set<std::set<NodeId>> got, want;
  for (const auto& t : run.partition.teams) {
    const auto m = t.members();
    got.insert(std::set<NodeId>(m.begin(), m.end()));
  }
  for (const auto& c : cliques) want.insert(std::set<NodeId>(c.begin(), c.end()));
  EXPECT_EQ(got, want);
  const NodeId top = run.influence.top_k(1).front();
  const auto first = run.partition.teams[0].members();
  EXPECT_TRUE(std::find(first.begin(), first.end(), top) != first.end());
}

TEST(Nmi, Examples) {
  const std::vector<int> a{0, 0, 1, 1}, b{0, 1, 0, 1}, one{5, 5, 5, 5};
  EXPECT_NEAR(nmi(a, a), 1.0, 1e-12);
  EXPECT_NEAR(nmi(a, b), 0.0, 1e-12);
  EXPECT_NEAR(nmi(a, one), oracle::nmi(a, one), 1e-10);
  EXPECT_EQ(nmi(one, one), 1.0);
}

TEST(Nmi, MatchesEntropyOracleAndIsSymmetric) {
  Rng rng = make_rng(5, "nmi");
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = 1 + uniform_index(rng, 40);
    std::vector<int> a(n), b(n);
    const auto ka = 1 + uniform_index(rng, 6), kb = 1 + uniform_index(rng, 6);
    for (auto& v : a) v = static_cast<int>(uniform_index(rng, ka));
    for (auto& v : b) v = static_cast<int>(uniform_index(rng, kb));
    const double x = nmi(a, b);
    EXPECT_NEAR(x, oracle::nmi(a, b), 1e-10);
    EXPECT_NEAR(x, nmi(b, a), 1e-12);
    EXPECT_GE(x, -1e-12);
    EXPECT_LE(x, 1.0 + 1e-12);
    if (std::set<int>(a.begin(), a.end()).size() >= 2) EXPECT_NEAR(nmi(a, a), 1.0, 1e-12);
  }
}

TEST(Nmi, PartitionAgainstTruth) {
  TeamPartition p;
  p.teams.push_back({1, {2}, {}});
  p.teams.push_back({3, {}, {4}});
  const std::map<NodeId, int> truth{{1, 0}, {2, 0}, {3, 1}, {4, 1}};
  EXPECT_NEAR(partition_nmi(p, truth), 1.0, 1e-12);
  TeamPartition merged;
  merged.teams.push_back({1, {2, 3, 4}, {}});
  EXPECT_NEAR(partition_nmi(merged, truth), oracle::nmi({0, 0, 1, 1}, {0, 0, 0, 0}), 1e-10);
  const std::map<NodeId, int> bigger{{1, 0}, {2, 0}, {3, 1}, {4, 1}, {9, 2}};
  EXPECT_EQ(code_of([&] { partition_nmi(p, bigger); }), ErrorCode::UniverseMismatch);
  EXPECT_NEAR(partition_nmi_top(p, truth, 1), 1.0, 1e-12);
}

TEST(Nmi, ResidualNodesAreSingletons) {
  TeamPartition p;
  p.teams.push_back({1, {2}, {}});
  p.residual = {3, 4};
  const std::vector<NodeId> universe{1, 2, 3, 4};
  const auto c = p.clusters(universe);
  EXPECT_EQ(c[0], c[1]);
  EXPECT_NE(c[2], c[3]);
  EXPECT_NE(c[2], c[0]);
}

TEST(F1, Examples) {
  const std::vector<int> truth{0, 0, 1, 1};
  const auto perfect = f1_scores(truth, truth);
  EXPECT_EQ(perfect.micro, 1.0);
  EXPECT_EQ(perfect.macro, 1.0);
  const auto half = f1_scores(std::vector<int>{0, 1, 0, 1}, truth);
  EXPECT_DOUBLE_EQ(half.micro, 0.5);
  EXPECT_DOUBLE_EQ(half.macro, 0.5);
  const auto flat = f1_scores(std::vector<int>{0, 0, 0, 0}, truth);
  EXPECT_DOUBLE_EQ(flat.micro, 0.5);
  EXPECT_NEAR(flat.macro, 1.0 / 3.0, 1e-15);
  EXPECT_EQ(code_of([&] { f1_scores(std::vector<int>{0}, truth); }), ErrorCode::LengthMismatch);
}

TEST(F1, MicroEqualsAccuracy) {
  Rng rng = make_rng(6, "f1");
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 1 + uniform_index(rng, 50);
    std::vector<int> a(n), b(n);
    for (auto& v : a) v = static_cast<int>(uniform_index(rng, 4));
    for (auto& v : b) v = static_cast<int>(uniform_index(rng, 4));
    std::size_t hits = 0;
    for (std::size_t i = 0; i < n; ++i) hits += a[i] == b[i];
    EXPECT_EQ(f1_scores(a, b).micro, static_cast<double>(hits) / static_cast<double>(n));
  }
}
