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
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hinforge/autodiff.hpp"
#include "hinforge/graph.hpp"
#include "hinforge/rng.hpp"

namespace hinforge {

inline constexpr std::size_t kAllNeighbors = std::numeric_limits<std::size_t>::max();

struct Hyperparams {
  std::size_t embedding_dim = 16;  ///< d
  std::size_t semantic_dim = 8;    ///< k
  std::size_t neighbor_samples = 10;  ///< S; kAllNeighbors disables sampling
  double learning_rate = 2.0;
  std::size_t local_epochs = 30;
  std::size_t batch_size = 32;
  std::uint64_t seed = 0;
  /// Missing classes in the training split throw instead of logging.
  bool strict_class_coverage = false;

  void validate() const;
};

/// Read-only structures shared by every training context: the target-type
/// node set and, per meta-path, its adjacency rows as a sparse matrix over
/// local indices.
class ModelInputs {
 public:
  ModelInputs(const HeterogeneousGraph& g, std::vector<MetaPathAdjacency> adjacencies);

  std::size_t num_nodes() const noexcept { return nodes_.size(); }
  std::size_t num_meta_paths() const noexcept { return adjacencies_.size(); }
  std::span<const NodeId> nodes() const noexcept { return nodes_; }
  NodeId node(std::size_t local) const { return nodes_.at(local); }
  std::optional<std::size_t> local_index(NodeId v) const { return adjacencies_.front().start_index(v); }

  const MetaPathAdjacency& adjacency(std::size_t m) const { return adjacencies_.at(m); }
  const std::shared_ptr<const ad::CsrMatrix>& matrix(std::size_t m) const { return matrices_.at(m); }
  /// Local neighbor indices of `local` under meta-path m, ascending.
  std::span<const std::size_t> neighbors(std::size_t m, std::size_t local) const;

 private:
  std::vector<NodeId> nodes_;
  std::vector<MetaPathAdjacency> adjacencies_;
  std::vector<std::shared_ptr<const ad::CsrMatrix>> matrices_;
};

/// Learnable tensors. Row-vector convention throughout: A_i (1 x N) times
/// W_f (N x d) gives the d-dimensional projection of node i.
struct ModelParams {
  std::vector<ad::Tensor> transform;  ///< W_f per meta-path, N x d
  std::vector<ad::Tensor> combine;    ///< W_C per meta-path, 2d x d
  ad::Tensor semantic_weight;         ///< W_p, d x k
  ad::Tensor semantic_bias;           ///< b_p, 1 x k
  ad::Tensor preference;              ///< p_i rows, N x k
  ad::Tensor classifier_weight;       ///< d x L
  ad::Tensor classifier_bias;         ///< 1 x L
  std::uint64_t seed = 0;

  /// Xavier-uniform weights, zero biases, drawn from the "init" stream.
  static ModelParams initialize(std::size_t num_nodes, std::size_t num_meta_paths, std::size_t num_classes,
                                const Hyperparams& hp);

  std::size_t embedding_dim() const { return semantic_weight.rows(); }
  std::size_t semantic_dim() const { return semantic_weight.cols(); }
  std::size_t num_meta_paths() const { return transform.size(); }
  std::size_t num_nodes() const { return preference.rows(); }
  std::size_t num_classes() const { return classifier_bias.cols(); }

  /// Canonical declared order; `flatten`/`assign` and checkpoints follow it.
  std::vector<ad::Tensor*> tensors();
  std::vector<const ad::Tensor*> tensors() const;
  std::vector<std::string> tensor_names() const;
  std::size_t parameter_count() const;
  std::vector<double> flatten() const;
  void assign(std::span<const double> flat);
  void set_requires_grad(bool on);
  void zero_grad();

  friend bool operator==(const ModelParams& a, const ModelParams& b);
};

void save_checkpoint(const ModelParams& params, const std::filesystem::path& path);
ModelParams load_checkpoint(const std::filesystem::path& path);

/// Per-node labels over local indices; -1 marks unlabeled nodes.
using NodeLabels = std::vector<int>;

/// Up to `cap` neighbors drawn uniformly without replacement, returned in
/// ascending order. All neighbors are returned when there are at most `cap`.
std::vector<std::size_t> sample_neighbors(std::span<const std::size_t> neighbors, std::size_t cap, Rng& rng);

/// Tape-level forward pass of the model.
class Forward {
 public:
  struct NodeAttention {
    std::vector<std::size_t> sample;
    ad::Var scores;        ///< s_ij over the sample
    ad::Var coefficients;  ///< c_ij over the sample
  };
  struct StructuralEmbedding {
    NodeAttention attention;
    ad::Var aggregate;  ///< h_N(i)
    ad::Var embedding;  ///< h_i for this meta-path
  };
  struct SemanticAttention {
    ad::Var similarities;  ///< gamma' per meta-path
    ad::Var weights;       ///< gamma per meta-path
    ad::Var fused;         ///< h_i
  };

  /// Binds every parameter as a leaf of `tape`.
  Forward(ad::Tape& tape, const ModelInputs& inputs, ModelParams& params);
  /// Uses fixed projections A W_f (one N x d matrix per meta-path) instead of
  /// the transform leaves; for inference passes that need no gradient.
  Forward(ad::Tape& tape, const ModelInputs& inputs, ModelParams& params, std::span<const ad::Tensor> projections);

  /// Rows are A_i W_f for every local node.
  ad::Var projection(std::size_t m);
  NodeAttention node_attention(std::size_t m, std::size_t node, std::span<const std::size_t> sample);
  StructuralEmbedding structural_embedding(std::size_t m, std::size_t node, std::span<const std::size_t> sample);
  SemanticAttention semantic_attention(std::size_t node, std::span<const ad::Var> path_embeddings);
  ad::Var classify(ad::Var fused);

  /// Fused embedding of `node`, sampling neighbors with `rng` unless `cap`
  /// is kAllNeighbors.
  ad::Var embed(std::size_t node, std::size_t cap, Rng* rng);
  /// -sum over `batch` of ln C(h_i)[y_i].
  ad::Var loss(std::span<const std::size_t> batch, const NodeLabels& labels, std::size_t cap, Rng* rng);

  ad::Tape& tape() { return tape_; }

 private:
  ad::Tape& tape_;
  const ModelInputs& inputs_;
  ModelParams& params_;
  std::vector<ad::Var> transform_;
  std::vector<ad::Var> combine_;
  std::vector<std::optional<ad::Var>> projections_;
  ad::Var semantic_weight_, semantic_bias_, preference_, classifier_weight_, classifier_bias_;
};

// Value-level conveniences over Forward, one fresh tape per call.
std::vector<double> node_attention(const ModelInputs& inputs, const ModelParams& params, std::size_t m,
                                   std::size_t node, std::span<const std::size_t> sample);
std::vector<double> structural_embedding(const ModelInputs& inputs, const ModelParams& params, std::size_t m,
                                         std::size_t node, std::size_t cap, Rng& rng);
struct SemanticResult {
  std::vector<double> weights;
  std::vector<double> fused;
};
SemanticResult semantic_attention(const ModelParams& params, std::size_t node,
                                  std::span<const std::vector<double>> path_embeddings);
std::vector<double> classify(const ModelParams& params, std::span<const double> fused);
double loss(const ModelInputs& inputs, const ModelParams& params, std::span<const std::size_t> batch,
            const NodeLabels& labels, std::size_t cap, Rng& rng);

struct EmbeddingTable {
  std::vector<NodeId> nodes;  ///< global ids in local order
  std::size_t dim = 0;
  std::vector<std::vector<double>> fused;                   ///< [node] h_i
  std::vector<std::vector<std::vector<double>>> per_path;   ///< [node][m] h_i^pi
  std::vector<std::vector<double>> path_weights;            ///< [node][m] gamma_i^pi
};

/// Full-neighborhood attention coefficients: [m][node] -> (neighbor local, c).
using AttentionTable = std::vector<std::vector<std::vector<std::pair<std::size_t, double>>>>;

struct ForwardState {
  EmbeddingTable embeddings;
  AttentionTable attention;
  std::vector<std::vector<double>> class_probabilities;  ///< [node] C(h_i)
};

/// Deterministic inference pass over every target node with full neighborhoods.
ForwardState infer(const ModelInputs& inputs, const ModelParams& params);
EmbeddingTable embed_all(const ModelInputs& inputs, const ModelParams& params);
std::vector<int> predict(const ForwardState& state);

/// One SGD training context. The shuffle/sampling stream is owned by the
/// trainer and persists across `run_epochs` calls.
class Trainer {
 public:
  Trainer(const ModelInputs& inputs, ModelParams initial, Hyperparams hp, std::vector<std::size_t> train_nodes,
          NodeLabels labels, std::uint64_t stream_index = 0);

  void run_epochs(std::size_t epochs);
  const ModelParams& params() const { return params_; }
  ModelParams& params() { return params_; }
  const std::vector<double>& loss_curve() const { return loss_curve_; }
  std::size_t steps() const { return loss_curve_.size(); }

 private:
  const ModelInputs& inputs_;
  ModelParams params_;
  Hyperparams hp_;
  std::vector<std::size_t> train_nodes_;
  NodeLabels labels_;
  Rng rng_;
  std::vector<double> loss_curve_;
};

struct TrainResult {
  ModelParams params;
  std::vector<double> loss_curve;
};

/// Checks the training split; throws EmptyTrainingSet, or
/// ClassMissingFromTrainingSet when `hp.strict_class_coverage` is set.
void validate_training_split(std::span<const std::size_t> train_nodes, const NodeLabels& labels,
                             std::size_t num_classes, const Hyperparams& hp);

TrainResult train(const ModelInputs& inputs, const NodeLabels& labels, std::span<const std::size_t> train_nodes,
                  std::size_t num_classes, const Hyperparams& hp);

}  // namespace hinforge
