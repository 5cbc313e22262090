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

#include "hinforge/influence.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>
#include <set>

#include "hinforge/error.hpp"

namespace hinforge {

std::string_view to_string(InfluenceMethod m) {
  switch (m) {
    case InfluenceMethod::NAC: return "nac";
    case InfluenceMethod::DC: return "dc";
    case InfluenceMethod::BC: return "bc";
    case InfluenceMethod::CC: return "cc";
    case InfluenceMethod::EC: return "ec";
  }
  return "?";
}

std::vector<std::size_t> InfluenceScores::ranking() const {
  std::vector<std::size_t> order(nodes.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (scores[a] != scores[b]) return scores[a] > scores[b];
    return nodes[a] < nodes[b];
  });
  return order;
}

std::vector<NodeId> InfluenceScores::top_k(std::size_t k) const {
  if (k > nodes.size()) raise(ErrorCode::KTooLarge, "K=" + std::to_string(k) + " with n=" + std::to_string(nodes.size()));
  const auto order = ranking();
  std::vector<NodeId> out;
  for (std::size_t i = 0; i < k; ++i) out.push_back(nodes[order[i]]);
  return out;
}

InfluenceScores nac_influence(const ForwardState& state, const ModelInputs& inputs) {
  const std::size_t n = inputs.num_nodes(), M = inputs.num_meta_paths();
  InfluenceScores out;
  out.method = InfluenceMethod::NAC;
  out.nodes.assign(inputs.nodes().begin(), inputs.nodes().end());
  out.scores.assign(n, 0.0);
  for (std::size_t m = 0; m < M; ++m) {
    std::vector<double> received(n, 0.0);
    std::vector<std::size_t> senders(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
      for (const auto& [j, c] : state.attention.at(m).at(i)) {
        received[j] += c;
        ++senders[j];
      }
    }
    for (std::size_t j = 0; j < n; ++j) {
      if (senders[j] > 0) out.scores[j] += received[j] / static_cast<double>(senders[j]);
    }
  }
  for (double& s : out.scores) s /= static_cast<double>(M);
  return out;
}

SimpleGraph projection_graph(const MetaPathAdjacency& adj) {
  SimpleGraph g;
  const auto starts = adj.start_nodes();
  g.nodes.assign(starts.begin(), starts.end());
  g.adj.resize(g.nodes.size());
  std::vector<std::set<std::size_t>> sets(g.nodes.size());
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    for (const auto& e : adj.row_at(i)) {
      const auto j = adj.start_index(e.node);
      if (!j || *j == i) continue;
      sets[i].insert(*j);
      sets[*j].insert(i);
    }
  }
  for (std::size_t i = 0; i < g.nodes.size(); ++i) g.adj[i].assign(sets[i].begin(), sets[i].end());
  return g;
}

namespace {

std::vector<double> degree_centrality(const SimpleGraph& g) {
  const std::size_t n = g.size();
  std::vector<double> out(n, 0.0);
  if (n < 2) return out;
  for (std::size_t v = 0; v < n; ++v) out[v] = static_cast<double>(g.adj[v].size()) / static_cast<double>(n - 1);
  return out;
}

std::vector<double> betweenness_centrality(const SimpleGraph& g) {
  const std::size_t n = g.size();
  std::vector<double> bc(n, 0.0);
  std::vector<std::size_t> order;
  std::vector<std::vector<std::size_t>> preds(n);
  std::vector<double> sigma(n), delta(n);
  std::vector<long> dist(n);
  for (std::size_t s = 0; s < n; ++s) {
    order.clear();
    for (auto& p : preds) p.clear();
    std::fill(sigma.begin(), sigma.end(), 0.0);
    std::fill(delta.begin(), delta.end(), 0.0);
    std::fill(dist.begin(), dist.end(), -1);
    sigma[s] = 1.0;
    dist[s] = 0;
    std::deque<std::size_t> queue{s};
    while (!queue.empty()) {
      const std::size_t v = queue.front();
      queue.pop_front();
      order.push_back(v);
      for (std::size_t w : g.adj[v]) {
        if (dist[w] < 0) {
          dist[w] = dist[v] + 1;
          queue.push_back(w);
        }
        if (dist[w] == dist[v] + 1) {
          sigma[w] += sigma[v];
          preds[w].push_back(v);
        }
      }
    }
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      const std::size_t w = *it;
      for (std::size_t v : preds[w]) delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
      if (w != s) bc[w] += delta[w];
    }
  }
  // Each unordered pair was counted from both ends.
  const double pairs = n > 2 ? static_cast<double>((n - 1) * (n - 2)) / 2.0 : 0.0;
  for (double& v : bc) v = pairs > 0.0 ? (v / 2.0) / pairs : 0.0;
  return bc;
}

std::vector<double> harmonic_closeness(const SimpleGraph& g) {
  const std::size_t n = g.size();
  std::vector<double> out(n, 0.0);
  if (n < 2) return out;
  std::vector<long> dist(n);
  for (std::size_t s = 0; s < n; ++s) {
    std::fill(dist.begin(), dist.end(), -1);
    dist[s] = 0;
    std::deque<std::size_t> queue{s};
    double total = 0.0;
    while (!queue.empty()) {
      const std::size_t v = queue.front();
      queue.pop_front();
      if (v != s) total += 1.0 / static_cast<double>(dist[v]);
      for (std::size_t w : g.adj[v]) {
        if (dist[w] < 0) {
          dist[w] = dist[v] + 1;
          queue.push_back(w);
        }
      }
    }
    out[s] = total / static_cast<double>(n - 1);
  }
  return out;
}

std::vector<double> eigenvector_centrality(const SimpleGraph& g) {
  const std::size_t n = g.size();
  std::vector<double> out(n, 0.0);
  // Largest component; ties go to the one holding the smallest index.
  std::vector<long> comp(n, -1);
  std::vector<std::size_t> best;
  for (std::size_t s = 0; s < n; ++s) {
    if (comp[s] >= 0) continue;
    std::vector<std::size_t> members{s};
    comp[s] = static_cast<long>(s);
    for (std::size_t k = 0; k < members.size(); ++k) {
      for (std::size_t w : g.adj[members[k]]) {
        if (comp[w] < 0) {
          comp[w] = static_cast<long>(s);
          members.push_back(w);
        }
      }
    }
    if (members.size() > best.size()) best = std::move(members);
  }
  std::sort(best.begin(), best.end());
  const std::size_t c = best.size();
  std::vector<std::size_t> local(n, 0);
  for (std::size_t k = 0; k < c; ++k) local[best[k]] = k;

  // Power iteration on A + I: same eigenvectors, and the shift keeps
  // bipartite components from oscillating.
  std::vector<double> x(c, 1.0 / std::sqrt(static_cast<double>(c))), y(c), ax(c);
  auto multiply = [&](const std::vector<double>& in, std::vector<double>& res) {
    for (std::size_t k = 0; k < c; ++k) {
      double s = 0.0;
      for (std::size_t w : g.adj[best[k]]) s += in[local[w]];
      res[k] = s;
    }
  };
  for (int iter = 0; iter < 1000000; ++iter) {
    multiply(x, ax);
    double mu = 0.0, norm = 0.0;
    for (std::size_t k = 0; k < c; ++k) mu += x[k] * ax[k];
    double residual = 0.0;
    for (std::size_t k = 0; k < c; ++k) residual += (ax[k] - mu * x[k]) * (ax[k] - mu * x[k]);
    if (std::sqrt(residual) < 1e-10) break;
    for (std::size_t k = 0; k < c; ++k) {
      y[k] = ax[k] + x[k];
      norm += y[k] * y[k];
    }
    norm = std::sqrt(norm);
    for (std::size_t k = 0; k < c; ++k) x[k] = y[k] / norm;
  }
  for (std::size_t k = 0; k < c; ++k) out[best[k]] = std::abs(x[k]);
  return out;
}

}  // namespace

InfluenceScores centrality(const SimpleGraph& g, InfluenceMethod kind) {
  if (g.size() == 0) raise(ErrorCode::EmptyGraph, "centrality of an empty graph");
  InfluenceScores out;
  out.method = kind;
  out.nodes = g.nodes;
  switch (kind) {
    case InfluenceMethod::DC: out.scores = degree_centrality(g); break;
    case InfluenceMethod::BC: out.scores = betweenness_centrality(g); break;
    case InfluenceMethod::CC: out.scores = harmonic_closeness(g); break;
    case InfluenceMethod::EC: out.scores = eigenvector_centrality(g); break;
    case InfluenceMethod::NAC: raise(ErrorCode::ConfigError, "NAC is not a structural centrality");
  }
  return out;
}

double topk_intersection(const InfluenceScores& a, const InfluenceScores& b, std::size_t k) {
  if (a.nodes != b.nodes) raise(ErrorCode::UniverseMismatch, "score maps cover different node sets");
  if (k == 0) raise(ErrorCode::ConfigError, "K must be >= 1");
  auto ta = a.top_k(k), tb = b.top_k(k);
  std::sort(ta.begin(), ta.end());
  std::sort(tb.begin(), tb.end());
  std::vector<NodeId> common;
  std::set_intersection(ta.begin(), ta.end(), tb.begin(), tb.end(), std::back_inserter(common));
  return static_cast<double>(common.size()) / static_cast<double>(k);
}

}  // namespace hinforge
