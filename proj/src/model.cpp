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

#include "hinforge/model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "hinforge/error.hpp"
#include "hinforge/format.hpp"
#include "hinforge/log.hpp"

namespace hinforge {

using ad::Tape;
using ad::Tensor;
using ad::Var;

void Hyperparams::validate() const {
  if (embedding_dim < 1) raise(ErrorCode::ConfigError, "embedding_dim must be >= 1");
  if (semantic_dim < 1) raise(ErrorCode::ConfigError, "semantic_dim must be >= 1");
  if (neighbor_samples < 1) raise(ErrorCode::ConfigError, "neighbor_samples must be >= 1");
  if (local_epochs < 1) raise(ErrorCode::ConfigError, "local_epochs must be >= 1");
  if (batch_size < 1) raise(ErrorCode::ConfigError, "batch_size must be >= 1");
  if (!(learning_rate >= 0.0) || !std::isfinite(learning_rate)) {
    raise(ErrorCode::ConfigError, "learning_rate must be finite and non-negative");
  }
}

// ---------------------------------------------------------------------------
// ModelInputs

ModelInputs::ModelInputs(const HeterogeneousGraph& g, std::vector<MetaPathAdjacency> adjacencies)
    : adjacencies_(std::move(adjacencies)) {
  if (adjacencies_.empty()) raise(ErrorCode::ConfigError, "at least one meta-path is required");
  const NodeTypeId target = adjacencies_.front().meta_path().start_type();
  for (const auto& adj : adjacencies_) {
    const auto& mp = adj.meta_path();
    if (mp.start_type() != target || mp.end_type() != target) {
      raise(ErrorCode::ConfigError, "meta-path " + mp.name(g) + " must start and end at the target node type '" +
                                        g.node_type_names().name(target.value) + "'");
    }
  }
  const auto starts = adjacencies_.front().start_nodes();
  nodes_.assign(starts.begin(), starts.end());
  for (const auto& adj : adjacencies_) {
    auto csr = std::make_shared<ad::CsrMatrix>();
    csr->rows = nodes_.size();
    csr->cols = nodes_.size();
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      for (const auto& e : adj.row_at(i)) {
        csr->col_idx.push_back(*adj.end_index(e.node));
        csr->values.push_back(e.weight);
      }
      csr->row_ptr.push_back(csr->col_idx.size());
    }
    matrices_.push_back(std::move(csr));
  }
}

std::span<const std::size_t> ModelInputs::neighbors(std::size_t m, std::size_t local) const {
  const auto& csr = *matrices_.at(m);
  return std::span<const std::size_t>(csr.col_idx).subspan(csr.row_ptr.at(local),
                                                           csr.row_ptr.at(local + 1) - csr.row_ptr.at(local));
}

// ---------------------------------------------------------------------------
// ModelParams

namespace {

Tensor xavier(std::size_t rows, std::size_t cols, Rng& rng) {
  const double a = std::sqrt(6.0 / static_cast<double>(rows + cols));
  Tensor t(rows, cols);
  for (double& v : t.data()) v = uniform(rng, -a, a);
  return t;
}

}  // namespace

ModelParams ModelParams::initialize(std::size_t num_nodes, std::size_t num_meta_paths, std::size_t num_classes,
                                    const Hyperparams& hp) {
  hp.validate();
  if (num_nodes == 0) raise(ErrorCode::EmptyGraph, "no target-type nodes");
  if (num_classes == 0) raise(ErrorCode::ConfigError, "at least one label class is required");
  Rng rng = make_rng(hp.seed, "init");
  const std::size_t d = hp.embedding_dim, k = hp.semantic_dim;
  ModelParams p;
  p.seed = hp.seed;
  for (std::size_t m = 0; m < num_meta_paths; ++m) {
    p.transform.push_back(xavier(num_nodes, d, rng));
    p.combine.push_back(xavier(2 * d, d, rng));
  }
  p.semantic_weight = xavier(d, k, rng);
  p.semantic_bias = Tensor(1, k);
  p.preference = xavier(num_nodes, k, rng);
  p.classifier_weight = xavier(d, num_classes, rng);
  p.classifier_bias = Tensor(1, num_classes);
  return p;
}

std::vector<Tensor*> ModelParams::tensors() {
  std::vector<Tensor*> out;
  for (std::size_t m = 0; m < transform.size(); ++m) {
    out.push_back(&transform[m]);
    out.push_back(&combine[m]);
  }
  for (Tensor* t : {&semantic_weight, &semantic_bias, &preference, &classifier_weight, &classifier_bias}) {
    out.push_back(t);
  }
  return out;
}

std::vector<const Tensor*> ModelParams::tensors() const {
  auto mut = const_cast<ModelParams*>(this)->tensors();
  return {mut.begin(), mut.end()};
}

std::vector<std::string> ModelParams::tensor_names() const {
  std::vector<std::string> out;
  for (std::size_t m = 0; m < transform.size(); ++m) {
    out.push_back("transform/" + std::to_string(m));
    out.push_back("combine/" + std::to_string(m));
  }
  for (const char* n : {"semantic_weight", "semantic_bias", "preference", "classifier_weight", "classifier_bias"}) {
    out.emplace_back(n);
  }
  return out;
}

std::size_t ModelParams::parameter_count() const {
  std::size_t n = 0;
  for (const Tensor* t : tensors()) n += t->size();
  return n;
}

std::vector<double> ModelParams::flatten() const {
  std::vector<double> out;
  out.reserve(parameter_count());
  for (const Tensor* t : tensors()) out.insert(out.end(), t->data().begin(), t->data().end());
  return out;
}

void ModelParams::assign(std::span<const double> flat) {
  if (flat.size() != parameter_count()) {
    raise(ErrorCode::ShapeMismatch, "flat vector of " + std::to_string(flat.size()) + " for " +
                                        std::to_string(parameter_count()) + " parameters");
  }
  std::size_t offset = 0;
  for (Tensor* t : tensors()) {
    std::copy_n(flat.begin() + static_cast<std::ptrdiff_t>(offset), t->size(), t->data().begin());
    offset += t->size();
  }
}

void ModelParams::set_requires_grad(bool on) {
  for (Tensor* t : tensors()) t->set_requires_grad(on);
}

void ModelParams::zero_grad() {
  for (Tensor* t : tensors()) t->zero_grad();
}

bool operator==(const ModelParams& a, const ModelParams& b) {
  return a.seed == b.seed && a.transform == b.transform && a.combine == b.combine &&
         a.semantic_weight == b.semantic_weight && a.semantic_bias == b.semantic_bias &&
         a.preference == b.preference && a.classifier_weight == b.classifier_weight &&
         a.classifier_bias == b.classifier_bias;
}

namespace {
constexpr const char* kCheckpointMagic = "hinforge-checkpoint";
constexpr int kCheckpointVersion = 1;
}  // namespace

void save_checkpoint(const ModelParams& params, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) raise(ErrorCode::IoError, "cannot write " + path.string());
  out << kCheckpointMagic << ' ' << kCheckpointVersion << '\n';
  out << "d " << params.embedding_dim() << '\n';
  out << "k " << params.semantic_dim() << '\n';
  out << "M " << params.num_meta_paths() << '\n';
  out << "N " << params.num_nodes() << '\n';
  out << "L " << params.num_classes() << '\n';
  out << "seed " << params.seed << '\n';
  const auto names = params.tensor_names();
  const auto tensors = params.tensors();
  for (std::size_t i = 0; i < tensors.size(); ++i) {
    out << "tensor " << names[i] << ' ' << tensors[i]->rows() << ' ' << tensors[i]->cols() << '\n';
    for (std::size_t j = 0; j < tensors[i]->size(); ++j) {
      out << (j ? " " : "") << format_double((*tensors[i])[j]);
    }
    out << '\n';
  }
  if (!out) raise(ErrorCode::IoError, "write failed for " + path.string());
}

ModelParams load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(ErrorCode::IoError, "cannot read " + path.string());
  std::string magic;
  int version = 0;
  in >> magic >> version;
  if (magic != kCheckpointMagic || version != kCheckpointVersion) {
    raise(ErrorCode::ParseError, path.string() + " is not a version-1 checkpoint");
  }
  auto read_field = [&](const char* name) {
    std::string key;
    std::uint64_t value = 0;
    in >> key >> value;
    if (!in || key != name) raise(ErrorCode::ParseError, std::string("expected header field ") + name);
    return value;
  };
  const auto d = read_field("d");
  const auto k = read_field("k");
  const auto M = read_field("M");
  const auto N = read_field("N");
  const auto L = read_field("L");
  const auto seed = read_field("seed");

  ModelParams p;
  p.seed = seed;
  p.transform.assign(M, Tensor(N, d));
  p.combine.assign(M, Tensor(2 * d, d));
  p.semantic_weight = Tensor(d, k);
  p.semantic_bias = Tensor(1, k);
  p.preference = Tensor(N, k);
  p.classifier_weight = Tensor(d, L);
  p.classifier_bias = Tensor(1, L);
  const auto names = p.tensor_names();
  const auto tensors = p.tensors();
  for (std::size_t i = 0; i < tensors.size(); ++i) {
    std::string tag, name;
    std::size_t rows = 0, cols = 0;
    in >> tag >> name >> rows >> cols;
    if (!in || tag != "tensor" || name != names[i] || rows != tensors[i]->rows() || cols != tensors[i]->cols()) {
      raise(ErrorCode::ParseError, "tensor header mismatch at " + names[i]);
    }
    for (std::size_t j = 0; j < tensors[i]->size(); ++j) {
      std::string token;
      in >> token;
      if (!in) raise(ErrorCode::ParseError, "truncated tensor " + names[i]);
      (*tensors[i])[j] = parse_double(token);
    }
  }
  return p;
}

// ---------------------------------------------------------------------------
// Forward pass

std::vector<std::size_t> sample_neighbors(std::span<const std::size_t> neighbors, std::size_t cap, Rng& rng) {
  std::vector<std::size_t> pool(neighbors.begin(), neighbors.end());
  if (pool.size() <= cap) return pool;
  // partial Fisher-Yates
  for (std::size_t i = 0; i < cap; ++i) {
    const std::size_t j = i + uniform_index(rng, pool.size() - i);
    std::swap(pool[i], pool[j]);
  }
  pool.resize(cap);
  std::sort(pool.begin(), pool.end());
  return pool;
}

namespace {

Forward::SemanticAttention semantic_on(Tape& tape, Var weight, Var bias, Var preference_row,
                                       std::span<const Var> path_embeddings) {
  std::vector<Var> sims;
  sims.reserve(path_embeddings.size());
  for (Var h : path_embeddings) {
    Var transformed = tape.tanh(tape.add(tape.matmul(h, weight), bias));
    sims.push_back(tape.cosine_similarity(preference_row, transformed));
  }
  Forward::SemanticAttention out;
  out.similarities = tape.concat(sims);
  out.weights = tape.softmax(out.similarities);
  out.fused = tape.matmul(out.weights, tape.stack_rows(path_embeddings));
  return out;
}

Var classify_on(Tape& tape, Var weight, Var bias, Var fused) {
  return tape.softmax(tape.add(tape.matmul(fused, weight), bias));
}

}  // namespace

Forward::Forward(Tape& tape, const ModelInputs& inputs, ModelParams& params)
    : tape_(tape), inputs_(inputs), params_(params) {
  if (params.num_meta_paths() != inputs.num_meta_paths() || params.num_nodes() != inputs.num_nodes()) {
    raise(ErrorCode::ShapeMismatch, "parameters do not match the model inputs");
  }
  for (std::size_t m = 0; m < params.num_meta_paths(); ++m) {
    transform_.push_back(tape.leaf(params.transform[m]));
    combine_.push_back(tape.leaf(params.combine[m]));
  }
  projections_.resize(params.num_meta_paths());
  semantic_weight_ = tape.leaf(params.semantic_weight);
  semantic_bias_ = tape.leaf(params.semantic_bias);
  preference_ = tape.leaf(params.preference);
  classifier_weight_ = tape.leaf(params.classifier_weight);
  classifier_bias_ = tape.leaf(params.classifier_bias);
}

Forward::Forward(Tape& tape, const ModelInputs& inputs, ModelParams& params, std::span<const Tensor> projections)
    : tape_(tape), inputs_(inputs), params_(params) {
  if (projections.size() != inputs.num_meta_paths() || params.num_meta_paths() != inputs.num_meta_paths()) {
    raise(ErrorCode::ShapeMismatch, "projection count does not match the meta-path count");
  }
  for (std::size_t m = 0; m < params.num_meta_paths(); ++m) {
    combine_.push_back(tape.leaf(params.combine[m]));
    projections_.emplace_back(tape.constant(projections[m]));
  }
  semantic_weight_ = tape.leaf(params.semantic_weight);
  semantic_bias_ = tape.leaf(params.semantic_bias);
  preference_ = tape.leaf(params.preference);
  classifier_weight_ = tape.leaf(params.classifier_weight);
  classifier_bias_ = tape.leaf(params.classifier_bias);
}

Var Forward::projection(std::size_t m) {
  if (!projections_.at(m)) projections_[m] = tape_.sparse_matmul(inputs_.matrix(m), transform_.at(m));
  return *projections_[m];
}

Forward::NodeAttention Forward::node_attention(std::size_t m, std::size_t node, std::span<const std::size_t> sample) {
  if (sample.empty()) {
    raise(ErrorCode::EmptyNeighborhood, "node " + std::to_string(inputs_.node(node)) + " has no sampled neighbors");
  }
  Var z = projection(m);
  Var zi = tape_.row(z, node);
  std::vector<Var> scores;
  scores.reserve(sample.size());
  for (std::size_t j : sample) scores.push_back(tape_.cosine_similarity(zi, tape_.row(z, j)));
  NodeAttention out;
  out.sample.assign(sample.begin(), sample.end());
  out.scores = tape_.concat(scores);
  out.coefficients = tape_.softmax(out.scores);
  return out;
}

Forward::StructuralEmbedding Forward::structural_embedding(std::size_t m, std::size_t node,
                                                           std::span<const std::size_t> sample) {
  Var z = projection(m);
  Var zi = tape_.row(z, node);
  StructuralEmbedding out;
  if (sample.empty()) {
    out.aggregate = tape_.constant(Tensor(1, params_.embedding_dim()));
  } else {
    out.attention = node_attention(m, node, sample);
    Var neighbors = tape_.gather_rows(z, sample);
    out.aggregate = tape_.relu(tape_.matmul(out.attention.coefficients, neighbors));
  }
  out.embedding = tape_.matmul(tape_.concat({out.aggregate, zi}), combine_.at(m));
  return out;
}

Forward::SemanticAttention Forward::semantic_attention(std::size_t node, std::span<const Var> path_embeddings) {
  return semantic_on(tape_, semantic_weight_, semantic_bias_, tape_.row(preference_, node), path_embeddings);
}

Var Forward::classify(Var fused) { return classify_on(tape_, classifier_weight_, classifier_bias_, fused); }

Var Forward::embed(std::size_t node, std::size_t cap, Rng* rng) {
  std::vector<Var> paths;
  paths.reserve(inputs_.num_meta_paths());
  for (std::size_t m = 0; m < inputs_.num_meta_paths(); ++m) {
    const auto all = inputs_.neighbors(m, node);
    std::vector<std::size_t> sample;
    if (cap == kAllNeighbors || all.size() <= cap) {
      sample.assign(all.begin(), all.end());
    } else {
      sample = sample_neighbors(all, cap, *rng);
    }
    paths.push_back(structural_embedding(m, node, sample).embedding);
  }
  return semantic_attention(node, paths).fused;
}

Var Forward::loss(std::span<const std::size_t> batch, const NodeLabels& labels, std::size_t cap, Rng* rng) {
  if (batch.empty()) raise(ErrorCode::EmptyTrainingSet, "empty batch");
  std::vector<Var> rows;
  std::vector<std::size_t> targets;
  rows.reserve(batch.size());
  for (std::size_t i : batch) {
    if (i >= labels.size() || labels[i] < 0) {
      raise(ErrorCode::UnlabeledNodeInBatch, "node " + std::to_string(inputs_.node(i)) + " has no label");
    }
    if (static_cast<std::size_t>(labels[i]) >= params_.num_classes()) {
      raise(ErrorCode::UnlabeledNodeInBatch, "label of node " + std::to_string(inputs_.node(i)) + " out of range");
    }
    rows.push_back(tape_.log(classify(embed(i, cap, rng))));
    targets.push_back(static_cast<std::size_t>(labels[i]));
  }
  return tape_.nll(tape_.stack_rows(rows), targets);
}

std::vector<double> node_attention(const ModelInputs& inputs, const ModelParams& params, std::size_t m,
                                   std::size_t node, std::span<const std::size_t> sample) {
  ModelParams copy = params;
  Tape tape;
  Forward f(tape, inputs, copy);
  auto att = f.node_attention(m, node, sample);
  const auto v = tape.value(att.coefficients).data();
  return {v.begin(), v.end()};
}

std::vector<double> structural_embedding(const ModelInputs& inputs, const ModelParams& params, std::size_t m,
                                         std::size_t node, std::size_t cap, Rng& rng) {
  ModelParams copy = params;
  Tape tape;
  Forward f(tape, inputs, copy);
  const auto all = inputs.neighbors(m, node);
  std::vector<std::size_t> sample =
      cap == kAllNeighbors ? std::vector<std::size_t>(all.begin(), all.end()) : sample_neighbors(all, cap, rng);
  const auto v = tape.value(f.structural_embedding(m, node, sample).embedding).data();
  return {v.begin(), v.end()};
}

SemanticResult semantic_attention(const ModelParams& params, std::size_t node,
                                  std::span<const std::vector<double>> path_embeddings) {
  Tape tape;
  std::vector<Var> paths;
  for (const auto& h : path_embeddings) paths.push_back(tape.constant(Tensor::row_vector(h)));
  Var pref = tape.row(tape.constant(params.preference), node);
  auto out = semantic_on(tape, tape.constant(params.semantic_weight), tape.constant(params.semantic_bias), pref, paths);
  const auto w = tape.value(out.weights).data();
  const auto h = tape.value(out.fused).data();
  return {{w.begin(), w.end()}, {h.begin(), h.end()}};
}

std::vector<double> classify(const ModelParams& params, std::span<const double> fused) {
  Tape tape;
  Var h = tape.constant(Tensor::row_vector(fused));
  Var p = classify_on(tape, tape.constant(params.classifier_weight), tape.constant(params.classifier_bias), h);
  const auto v = tape.value(p).data();
  return {v.begin(), v.end()};
}

double loss(const ModelInputs& inputs, const ModelParams& params, std::span<const std::size_t> batch,
            const NodeLabels& labels, std::size_t cap, Rng& rng) {
  ModelParams copy = params;
  Tape tape;
  Forward f(tape, inputs, copy);
  return tape.scalar(f.loss(batch, labels, cap, &rng));
}

// ---------------------------------------------------------------------------
// Inference

ForwardState infer(const ModelInputs& inputs, const ModelParams& params) {
  ModelParams copy = params;
  copy.set_requires_grad(false);
  std::vector<Tensor> projections;
  {
    Tape tape;
    Forward f(tape, inputs, copy);
    for (std::size_t m = 0; m < inputs.num_meta_paths(); ++m) projections.push_back(tape.value(f.projection(m)));
  }

  const std::size_t n = inputs.num_nodes(), M = inputs.num_meta_paths();
  ForwardState state;
  auto& table = state.embeddings;
  table.nodes.assign(inputs.nodes().begin(), inputs.nodes().end());
  table.dim = copy.embedding_dim();
  table.fused.resize(n);
  table.per_path.resize(n);
  table.path_weights.resize(n);
  state.attention.assign(M, std::vector<std::vector<std::pair<std::size_t, double>>>(n));
  state.class_probabilities.resize(n);

  for (std::size_t i = 0; i < n; ++i) {
    Tape tape;
    Forward f(tape, inputs, copy, projections);
    std::vector<Var> paths;
    for (std::size_t m = 0; m < M; ++m) {
      const auto all = inputs.neighbors(m, i);
      auto se = f.structural_embedding(m, i, all);
      if (!all.empty()) {
        const auto c = tape.value(se.attention.coefficients).data();
        for (std::size_t k = 0; k < all.size(); ++k) state.attention[m][i].emplace_back(all[k], c[k]);
      }
      const auto h = tape.value(se.embedding).data();
      table.per_path[i].emplace_back(h.begin(), h.end());
      paths.push_back(se.embedding);
    }
    auto sem = f.semantic_attention(i, paths);
    const auto w = tape.value(sem.weights).data();
    const auto h = tape.value(sem.fused).data();
    table.path_weights[i].assign(w.begin(), w.end());
    table.fused[i].assign(h.begin(), h.end());
    const auto p = tape.value(f.classify(sem.fused)).data();
    state.class_probabilities[i].assign(p.begin(), p.end());
  }
  return state;
}

EmbeddingTable embed_all(const ModelInputs& inputs, const ModelParams& params) {
  return infer(inputs, params).embeddings;
}

std::vector<int> predict(const ForwardState& state) {
  std::vector<int> out;
  out.reserve(state.class_probabilities.size());
  for (const auto& p : state.class_probabilities) {
    out.push_back(static_cast<int>(std::max_element(p.begin(), p.end()) - p.begin()));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Training

Trainer::Trainer(const ModelInputs& inputs, ModelParams initial, Hyperparams hp, std::vector<std::size_t> train_nodes,
                 NodeLabels labels, std::uint64_t stream_index)
    : inputs_(inputs),
      params_(std::move(initial)),
      hp_(hp),
      train_nodes_(std::move(train_nodes)),
      labels_(std::move(labels)),
      rng_(make_rng(hp.seed, "sampling", stream_index)) {
  hp_.validate();
  if (train_nodes_.empty()) raise(ErrorCode::EmptyTrainingSet, "no labeled training nodes");
  params_.set_requires_grad(true);
}

void Trainer::run_epochs(std::size_t epochs) {
  const std::size_t batch = std::min(hp_.batch_size, train_nodes_.size());
  for (std::size_t e = 0; e < epochs; ++e) {
    shuffle(std::span<std::size_t>(train_nodes_), rng_);
    for (std::size_t start = 0; start < train_nodes_.size(); start += batch) {
      const std::size_t end = std::min(start + batch, train_nodes_.size());
      const std::span<const std::size_t> chunk(train_nodes_.data() + start, end - start);
      Tape tape;
      Forward f(tape, inputs_, params_);
      Var l = f.loss(chunk, labels_, hp_.neighbor_samples, &rng_);
      params_.zero_grad();
      tape.backward(l);
      // Step on the batch-mean gradient so the rate does not scale with B.
      const double step = hp_.learning_rate / static_cast<double>(chunk.size());
      for (Tensor* t : params_.tensors()) {
        auto g = t->grad();
        auto v = t->data();
        for (std::size_t i = 0; i < v.size(); ++i) v[i] -= step * g[i];
      }
      loss_curve_.push_back(tape.scalar(l));
    }
  }
}

void validate_training_split(std::span<const std::size_t> train_nodes, const NodeLabels& labels,
                             std::size_t num_classes, const Hyperparams& hp) {
  if (train_nodes.empty()) raise(ErrorCode::EmptyTrainingSet, "no labeled training nodes");
  std::vector<bool> seen(num_classes, false);
  for (std::size_t i : train_nodes) {
    if (i >= labels.size() || labels[i] < 0 || static_cast<std::size_t>(labels[i]) >= num_classes) {
      raise(ErrorCode::UnlabeledNodeInBatch, "training node at local index " + std::to_string(i) + " has no valid label");
    }
    seen[static_cast<std::size_t>(labels[i])] = true;
  }
  for (std::size_t c = 0; c < num_classes; ++c) {
    if (seen[c]) continue;
    const std::string msg = "class " + std::to_string(c) + " has no training node";
    if (hp.strict_class_coverage) raise(ErrorCode::ClassMissingFromTrainingSet, msg);
    log::warn(msg);
  }
}

TrainResult train(const ModelInputs& inputs, const NodeLabels& labels, std::span<const std::size_t> train_nodes,
                  std::size_t num_classes, const Hyperparams& hp) {
  validate_training_split(train_nodes, labels, num_classes, hp);
  if (hp.batch_size > train_nodes.size()) {
    log::warn("batch size " + std::to_string(hp.batch_size) + " exceeds " + std::to_string(train_nodes.size()) +
              " training nodes; using full batch");
  }
  Trainer trainer(inputs, ModelParams::initialize(inputs.num_nodes(), inputs.num_meta_paths(), num_classes, hp), hp,
                  {train_nodes.begin(), train_nodes.end()}, labels);
  trainer.run_epochs(hp.local_epochs);
  TrainResult out{trainer.params(), trainer.loss_curve()};
  out.params.set_requires_grad(false);
  return out;
}

}  // namespace hinforge
