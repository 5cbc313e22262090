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

#include "hinforge/error.hpp"
#include "hinforge/influence.hpp"
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

SimpleGraph from_edges(std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& edges) {
  SimpleGraph g;
  g.nodes.resize(n);
  std::iota(g.nodes.begin(), g.nodes.end(), 0);
  g.adj.resize(n);
  for (auto [a, b] : edges) {
    g.adj[a].push_back(b);
    g.adj[b].push_back(a);
  }
  for (auto& nb : g.adj) std::sort(nb.begin(), nb.end());
  return g;
}

SimpleGraph random_simple_graph(std::size_t n, double p, Rng& rng) {
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      if (uniform01(rng) < p) edges.emplace_back(a, b);
    }
  }
  return from_edges(n, edges);
}

InfluenceScores scores_of(std::vector<double> s, InfluenceMethod m = InfluenceMethod::DC) {
  InfluenceScores out;
  out.method = m;
  out.nodes.resize(s.size());
  std::iota(out.nodes.begin(), out.nodes.end(), 0);
  out.scores = std::move(s);
  return out;
}

const std::vector<MetaPathSpec> kPaths{{{"author", "paper", "author"}, {}},
                                       {{"author", "paper", "venue", "paper", "author"}, {}}};

}  // namespace

TEST(Centrality, PathGraphBetweenness) {
  const auto g = from_edges(3, {{0, 1}, {1, 2}});
  const auto bc = centrality(g, InfluenceMethod::BC);
  EXPECT_DOUBLE_EQ(bc.scores[1], 1.0);
  EXPECT_DOUBLE_EQ(bc.scores[0], 0.0);
  EXPECT_DOUBLE_EQ(bc.scores[2], 0.0);
}

TEST(Centrality, StarDegree) {
  const auto g = from_edges(6, {{0, 1}, {0, 2}, {0, 3}, {0, 4}, {0, 5}});
  const auto dc = centrality(g, InfluenceMethod::DC);
  EXPECT_DOUBLE_EQ(dc.scores[0], 1.0);
  for (std::size_t s = 1; s < 6; ++s) EXPECT_DOUBLE_EQ(dc.scores[s], 0.2);
}

TEST(Centrality, CompleteGraphIsUniform) {
  const auto g = from_edges(4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}});
  for (auto kind : {InfluenceMethod::DC, InfluenceMethod::BC, InfluenceMethod::CC, InfluenceMethod::EC}) {
    const auto s = centrality(g, kind);
    for (std::size_t v = 1; v < 4; ++v) EXPECT_NEAR(s.scores[v], s.scores[0], 1e-12) << to_string(kind);
  }
}

TEST(Centrality, EmptyGraphAndNacRequest) {
  EXPECT_EQ(code_of([] { centrality(SimpleGraph{}, InfluenceMethod::DC); }), ErrorCode::EmptyGraph);
  EXPECT_EQ(code_of([] { centrality(from_edges(2, {{0, 1}}), InfluenceMethod::NAC); }), ErrorCode::ConfigError);
}

TEST(Centrality, MatchesBruteForceOracles) {
  Rng rng = make_rng(9, "cent");
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 1 + uniform_index(rng, 12);
    const auto g = random_simple_graph(n, uniform(rng, 0.1, 0.8), rng);
    const auto bc = centrality(g, InfluenceMethod::BC), cc = centrality(g, InfluenceMethod::CC),
               ec = centrality(g, InfluenceMethod::EC), dc = centrality(g, InfluenceMethod::DC);
    const auto obc = oracle::betweenness(g.adj), occ = oracle::harmonic_closeness(g.adj),
               oec = oracle::eigenvector(g.adj);
    for (std::size_t v = 0; v < n; ++v) {
      EXPECT_NEAR(bc.scores[v], obc[v], 1e-8) << "trial " << trial;
      EXPECT_NEAR(cc.scores[v], occ[v], 1e-8) << "trial " << trial;
      EXPECT_NEAR(ec.scores[v], oec[v], 1e-8) << "trial " << trial;
      const double expected_dc = n > 1 ? static_cast<double>(g.adj[v].size()) / static_cast<double>(n - 1) : 0.0;
      EXPECT_NEAR(dc.scores[v], expected_dc, 1e-12);
      for (double s : {bc.scores[v], cc.scores[v], ec.scores[v], dc.scores[v]}) EXPECT_GE(s, 0.0);
    }
  }
}

TEST(Centrality, RelabelingPermutesScores) {
  Rng rng = make_rng(10, "perm");
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 3 + uniform_index(rng, 9);
    const auto g = random_simple_graph(n, 0.4, rng);
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    shuffle(std::span<std::size_t>(perm), rng);
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b : g.adj[a]) {
        if (a < b) edges.emplace_back(perm[a], perm[b]);
      }
    }
    const auto h = from_edges(n, edges);
    for (auto kind : {InfluenceMethod::DC, InfluenceMethod::BC, InfluenceMethod::CC}) {
      const auto sg = centrality(g, kind), sh = centrality(h, kind);
      for (std::size_t v = 0; v < n; ++v) EXPECT_NEAR(sg.scores[v], sh.scores[perm[v]], 1e-12);
    }
  }
}

TEST(TopK, Examples) {
  const auto a = scores_of({0, 9, 8, 7, 6, 0, 0, 0});
  const auto b = scores_of({0, 0, 0, 9, 8, 7, 6, 0});
  EXPECT_EQ(a.top_k(4), (std::vector<NodeId>{1, 2, 3, 4}));
  EXPECT_EQ(b.top_k(4), (std::vector<NodeId>{3, 4, 5, 6}));
  EXPECT_DOUBLE_EQ(topk_intersection(a, b, 4), 0.5);
  EXPECT_DOUBLE_EQ(topk_intersection(a, a, 3), 1.0);
  const auto c = scores_of({1, 1, 0, 0});
  const auto d = scores_of({0, 0, 1, 1});
  EXPECT_DOUBLE_EQ(topk_intersection(c, d, 2), 0.0);
}

TEST(TopK, TiesBreakByNodeId) {
  const auto a = scores_of({0.5, 0.5, 0.5, 0.9});
  EXPECT_EQ(a.top_k(3), (std::vector<NodeId>{3, 0, 1}));
}

TEST(TopK, Errors) {
  const auto a = scores_of({1, 2, 3});
  EXPECT_EQ(code_of([&] { topk_intersection(a, a, 4); }), ErrorCode::KTooLarge);
  auto other = scores_of({1, 2, 3});
  other.nodes = {0, 1, 5};
  EXPECT_EQ(code_of([&] { topk_intersection(a, other, 2); }), ErrorCode::UniverseMismatch);
}

TEST(TopK, SymmetricAndFullAtN) {
  Rng rng = make_rng(11, "topk");
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + uniform_index(rng, 20);
    std::vector<double> x(n), y(n);
    for (auto& v : x) v = static_cast<double>(uniform_index(rng, 5));
    for (auto& v : y) v = static_cast<double>(uniform_index(rng, 5));
    const auto a = scores_of(x), b = scores_of(y);
    const std::size_t k = 1 + uniform_index(rng, n);
    EXPECT_EQ(topk_intersection(a, b, k), topk_intersection(b, a, k));
    EXPECT_EQ(topk_intersection(a, b, n), 1.0);
  }
}

TEST(Nac, StarHubDominates) {
  RawGraph raw;
  for (NodeId a = 0; a < 6; ++a) raw.add_node(a, "author", "x");
  for (NodeId s = 1; s < 6; ++s) {
    raw.add_node(5 + s, "paper");
    raw.add_edge(0, 5 + s, "writes");
    raw.add_edge(s, 5 + s, "writes");
  }
  const auto g = freeze_graph(raw);
  const std::vector<MetaPathSpec> apa{{{"author", "paper", "author"}, {}}};
  const auto inputs = build_inputs(g, "author", apa);
  Hyperparams hp;
  hp.seed = 3;
  const auto params = ModelParams::initialize(6, 1, 1, hp);
  const auto nac = nac_influence(infer(inputs, params), inputs);
  EXPECT_DOUBLE_EQ(nac.scores[0], 1.0);
  for (std::size_t s = 1; s < 6; ++s) EXPECT_GE(nac.scores[0], nac.scores[s]);
  EXPECT_EQ(nac.top_k(1), std::vector<NodeId>{0});
}

TEST(Nac, NodeWithoutInNeighborsScoresZero) {
  RawGraph raw;
  raw.add_node(0, "author");
  raw.add_node(1, "author");
  raw.add_node(2, "author");
  raw.add_node(3, "paper");
  raw.add_edge(0, 3, "writes");
  raw.add_edge(1, 3, "writes");
  const auto g = freeze_graph(raw);
  const std::vector<MetaPathSpec> apa{{{"author", "paper", "author"}, {}}};
  const auto inputs = build_inputs(g, "author", apa);
  const auto params = ModelParams::initialize(3, 1, 1, Hyperparams{});
  const auto nac = nac_influence(infer(inputs, params), inputs);
  EXPECT_EQ(nac.scores[2], 0.0);
  EXPECT_EQ(nac.scores[0], 1.0);
}

TEST(Nac, MatchesOracleOverReceivedAttention) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto g = oracle::random_academic_graph(11, 9, 2, seed);
    const auto inputs = build_inputs(g, "author", kPaths);
    Hyperparams hp;
    hp.embedding_dim = 4;
    hp.semantic_dim = 2;
    hp.seed = seed;
    const auto params = ModelParams::initialize(inputs.num_nodes(), 2, 3, hp);
    const auto nac = nac_influence(infer(inputs, params), inputs);

    const std::size_t n = inputs.num_nodes(), M = inputs.num_meta_paths();
    const auto A = oracle::dense_adjacency(inputs);
    std::vector<double> expected(n, 0.0);
    std::vector<oracle::NodeForward> fwd;
    for (std::size_t j = 0; j < n; ++j) fwd.push_back(oracle::forward(inputs, params, j));
    for (std::size_t m = 0; m < M; ++m) {
      std::vector<double> sum(n, 0.0);
      std::vector<int> cnt(n, 0);
      for (std::size_t j = 0; j < n; ++j) {
        std::size_t k = 0;
        for (std::size_t i = 0; i < n; ++i) {
          if (A[m][j][i] <= 0) continue;
          sum[i] += fwd[j].coefficients[m][k++];
          ++cnt[i];
        }
      }
      for (std::size_t i = 0; i < n; ++i) expected[i] += cnt[i] ? sum[i] / cnt[i] / static_cast<double>(M) : 0.0;
    }
    for (std::size_t i = 0; i < n; ++i) {
      EXPECT_NEAR(nac.scores[i], expected[i], 1e-12);
      EXPECT_GE(nac.scores[i], 0.0);
      EXPECT_LE(nac.scores[i], 1.0);
    }
  }
}

TEST(Projection, EdgesFollowMetaPathInstances) {
  const auto g = oracle::random_academic_graph(10, 8, 2, 4);
  const std::vector<std::string> names{"author", "paper", "author"};
  const auto mp = MetaPath::from_names(g, names);
  const auto proj = projection_graph(meta_path_adjacency(g, mp));
  const auto counts = path_instance_counts(g, mp);
  for (std::size_t a = 0; a < proj.size(); ++a) {
    for (std::size_t b = 0; b < proj.size(); ++b) {
      const bool edge = std::binary_search(proj.adj[a].begin(), proj.adj[a].end(), b);
      EXPECT_EQ(edge, counts.at(proj.nodes[a], proj.nodes[b]) > 0);
    }
  }
}
