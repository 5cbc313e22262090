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

#include "hinforge/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

#include <json.hpp>

#include "hinforge/error.hpp"
#include "hinforge/format.hpp"
#include "hinforge/io.hpp"
#include "hinforge/log.hpp"
#include "hinforge/rng.hpp"

namespace hinforge {

using json = nlohmann::json;

namespace {

[[noreturn]] void field_error(const std::string& field, const std::string& problem) {
  raise(ErrorCode::ConfigError, field + ": " + problem);
}

void reject_unknown(const json& obj, const std::string& where, std::initializer_list<const char*> keys) {
  if (!obj.is_object()) field_error(where.empty() ? "<root>" : where, "expected an object");
  const std::set<std::string> allowed(keys.begin(), keys.end());
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.count(key)) field_error(where.empty() ? key : where + "." + key, "unknown field");
  }
}

std::string path_of(const std::string& where, const char* key) { return where.empty() ? key : where + "." + key; }

std::uint64_t get_u64(const json& obj, const std::string& where, const char* key, std::uint64_t fallback) {
  if (!obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  if (!v.is_number_unsigned()) field_error(path_of(where, key), "expected a non-negative integer");
  return v.get<std::uint64_t>();
}

std::size_t get_size(const json& obj, const std::string& where, const char* key, std::size_t fallback) {
  return static_cast<std::size_t>(get_u64(obj, where, key, fallback));
}

double get_double(const json& obj, const std::string& where, const char* key, double fallback) {
  if (!obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  if (!v.is_number()) field_error(path_of(where, key), "expected a number");
  return v.get<double>();
}

bool get_bool(const json& obj, const std::string& where, const char* key, bool fallback) {
  if (!obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  if (!v.is_boolean()) field_error(path_of(where, key), "expected true or false");
  return v.get<bool>();
}

std::string get_string(const json& obj, const std::string& where, const char* key, const std::string& fallback) {
  if (!obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  if (!v.is_string()) field_error(path_of(where, key), "expected a string");
  return v.get<std::string>();
}

std::vector<std::size_t> get_sizes(const json& obj, const std::string& where, const char* key,
                                   std::vector<std::size_t> fallback) {
  if (!obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  if (!v.is_array()) field_error(path_of(where, key), "expected an array of integers");
  std::vector<std::size_t> out;
  for (const auto& e : v) {
    if (!e.is_number_unsigned()) field_error(path_of(where, key), "expected an array of non-negative integers");
    out.push_back(e.get<std::size_t>());
  }
  return out;
}

std::vector<std::string> get_strings(const json& v, const std::string& field) {
  if (!v.is_array()) field_error(field, "expected an array of strings");
  std::vector<std::string> out;
  for (const auto& e : v) {
    if (!e.is_string()) field_error(field, "expected an array of strings");
    out.push_back(e.get<std::string>());
  }
  return out;
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  const std::filesystem::path path(p);
  return path.is_absolute() ? path : base / path;
}

std::filesystem::path existing_path(const json& obj, const char* key, const std::filesystem::path& base) {
  const auto p = resolve(base, get_string(obj, "", key, ""));
  if (!std::filesystem::exists(p)) field_error(key, "file not found: " + p.string());
  return p;
}

PlantedConfig parse_planted(const json& j) {
  const std::string w = "synthetic";
  reject_unknown(j, w,
                 {"teams", "min_team_size", "max_team_size", "min_papers", "max_papers", "p_in", "p_out", "venue_noise",
                  "seed"});
  PlantedConfig c;
  c.teams = get_size(j, w, "teams", c.teams);
  c.min_team_size = get_size(j, w, "min_team_size", c.min_team_size);
  c.max_team_size = get_size(j, w, "max_team_size", c.max_team_size);
  c.min_papers = get_size(j, w, "min_papers", c.min_papers);
  c.max_papers = get_size(j, w, "max_papers", c.max_papers);
  c.p_in = get_double(j, w, "p_in", c.p_in);
  c.p_out = get_double(j, w, "p_out", c.p_out);
  c.venue_noise = get_double(j, w, "venue_noise", c.venue_noise);
  c.seed = get_u64(j, w, "seed", c.seed);
  try {
    c.validate();
  } catch (const Error& e) {
    field_error(w, e.what());
  }
  return c;
}

Hyperparams parse_model(const json& j) {
  const std::string w = "model";
  reject_unknown(j, w,
                 {"embedding_dim", "semantic_dim", "neighbor_samples", "learning_rate", "epochs", "batch_size",
                  "strict_class_coverage"});
  Hyperparams hp;
  hp.embedding_dim = get_size(j, w, "embedding_dim", hp.embedding_dim);
  hp.semantic_dim = get_size(j, w, "semantic_dim", hp.semantic_dim);
  if (j.contains("neighbor_samples") && j.at("neighbor_samples").is_string()) {
    if (j.at("neighbor_samples").get<std::string>() != "all") field_error("model.neighbor_samples", "expected an integer or \"all\"");
    hp.neighbor_samples = kAllNeighbors;
  } else {
    hp.neighbor_samples = get_size(j, w, "neighbor_samples", hp.neighbor_samples);
  }
  hp.learning_rate = get_double(j, w, "learning_rate", hp.learning_rate);
  hp.local_epochs = get_size(j, w, "epochs", hp.local_epochs);
  hp.batch_size = get_size(j, w, "batch_size", hp.batch_size);
  hp.strict_class_coverage = get_bool(j, w, "strict_class_coverage", hp.strict_class_coverage);
  try {
    hp.validate();
  } catch (const Error& e) {
    field_error(w, e.what());
  }
  return hp;
}

IdentificationConfig parse_teams(const json& j) {
  const std::string w = "teams";
  reject_unknown(j, w,
                 {"similar_k", "influential_k", "min_publications", "min_coauthor_frequency", "max_teams",
                  "keep_residual", "author_type", "paper_type"});
  IdentificationConfig c;
  c.similar_k = get_size(j, w, "similar_k", c.similar_k);
  c.influential_k = get_size(j, w, "influential_k", c.influential_k);
  c.min_publications = get_size(j, w, "min_publications", c.min_publications);
  c.min_coauthor_frequency = get_size(j, w, "min_coauthor_frequency", c.min_coauthor_frequency);
  if (j.contains("max_teams") && !j.at("max_teams").is_null()) c.max_teams = get_size(j, w, "max_teams", 0);
  c.keep_residual = get_bool(j, w, "keep_residual", c.keep_residual);
  c.author_type = get_string(j, w, "author_type", c.author_type);
  c.paper_type = get_string(j, w, "paper_type", c.paper_type);
  try {
    c.validate();
  } catch (const Error& e) {
    field_error(w, e.what());
  }
  return c;
}

FedSettings parse_fed(const json& j) {
  const std::string w = "fed";
  reject_unknown(j, w, {"clients", "rounds", "alpha", "threshold", "asynchronous", "periods"});
  FedSettings f;
  f.clients = get_size(j, w, "clients", f.clients);
  f.rounds = get_size(j, w, "rounds", f.rounds);
  f.alpha = get_double(j, w, "alpha", f.alpha);
  f.threshold = get_u64(j, w, "threshold", f.threshold);
  f.asynchronous = get_bool(j, w, "asynchronous", f.asynchronous);
  f.periods = get_sizes(j, w, "periods", {});
  if (f.clients < 1) field_error("fed.clients", "must be >= 1");
  if (f.rounds < 1) field_error("fed.rounds", "must be >= 1");
  if (!(f.alpha >= 0.0)) field_error("fed.alpha", "must be >= 0");
  if (!f.periods.empty() && f.periods.size() != f.clients) field_error("fed.periods", "needs one entry per client");
  for (auto p : f.periods) {
    if (p < 1) field_error("fed.periods", "entries must be >= 1");
  }
  return f;
}

SensitivitySettings parse_sensitivity(const json& j) {
  const std::string w = "sensitivity";
  reject_unknown(j, w, {"epochs", "batch_sizes", "clients", "rounds"});
  SensitivitySettings s;
  s.epochs = get_sizes(j, w, "epochs", s.epochs);
  s.batch_sizes = get_sizes(j, w, "batch_sizes", s.batch_sizes);
  s.clients = get_size(j, w, "clients", s.clients);
  s.rounds = get_size(j, w, "rounds", s.rounds);
  if (s.epochs.empty() || s.batch_sizes.empty()) field_error(w, "grid axes must be non-empty");
  for (auto e : s.epochs) {
    if (e < 1) field_error("sensitivity.epochs", "entries must be >= 1");
  }
  for (auto b : s.batch_sizes) {
    if (b < 1) field_error("sensitivity.batch_sizes", "entries must be >= 1");
  }
  if (s.clients < 1) field_error("sensitivity.clients", "must be >= 1");
  if (s.rounds < 1) field_error("sensitivity.rounds", "must be >= 1");
  return s;
}

std::vector<MetaPathSpec> default_meta_paths() {
  return {{{"author", "paper", "author"}, {}}, {{"author", "paper", "venue", "paper", "author"}, {}}};
}

}  // namespace

RunConfig RunConfig::defaults() {
  RunConfig c;
  c.meta_paths = default_meta_paths();
  return c;
}

RunConfig parse_run_config(const std::string& text, const std::filesystem::path& base_dir) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    raise(ErrorCode::ConfigError, std::string("config is not valid JSON: ") + e.what());
  }
  reject_unknown(j, "",
                 {"schema_version", "seed", "out", "graph", "synthetic", "truth", "checkpoint", "team_report",
                  "target_type", "meta_paths", "model", "teams", "fed", "sensitivity"});
  if (!j.contains("schema_version")) field_error("schema_version", "required");
  if (get_u64(j, "", "schema_version", 0) != kConfigSchemaVersion) {
    field_error("schema_version", "unsupported version (expected " + std::to_string(kConfigSchemaVersion) + ")");
  }
  RunConfig c = RunConfig::defaults();
  c.source_text = j.dump();
  if (j.contains("seed")) c.seed = get_u64(j, "", "seed", 0);
  c.out = resolve(base_dir, get_string(j, "", "out", "out"));
  if (j.contains("graph")) c.graph = existing_path(j, "graph", base_dir);
  if (j.contains("synthetic")) c.synthetic = parse_planted(j.at("synthetic"));
  if (c.graph && c.synthetic) field_error("graph", "give either graph or synthetic, not both");
  if (j.contains("truth")) c.truth = existing_path(j, "truth", base_dir);
  if (j.contains("checkpoint")) c.checkpoint = existing_path(j, "checkpoint", base_dir);
  if (j.contains("team_report")) c.team_report = resolve(base_dir, get_string(j, "", "team_report", ""));
  c.target_type = get_string(j, "", "target_type", c.target_type);
  if (j.contains("meta_paths")) {
    const auto& mps = j.at("meta_paths");
    if (!mps.is_array() || mps.empty()) field_error("meta_paths", "expected a non-empty array");
    c.meta_paths.clear();
    for (std::size_t k = 0; k < mps.size(); ++k) {
      const std::string field = "meta_paths[" + std::to_string(k) + "]";
      MetaPathSpec spec;
      if (mps[k].is_object()) {
        reject_unknown(mps[k], field, {"nodes", "edges"});
        if (!mps[k].contains("nodes")) field_error(field + ".nodes", "required");
        spec.node_types = get_strings(mps[k].at("nodes"), field + ".nodes");
        if (mps[k].contains("edges")) spec.edge_types = get_strings(mps[k].at("edges"), field + ".edges");
      } else {
        spec.node_types = get_strings(mps[k], field);
      }
      if (spec.node_types.size() < 2 || spec.node_types.size() > kMaxMetaPathLength) {
        field_error(field, "length must be in [2, " + std::to_string(kMaxMetaPathLength) + "]");
      }
      if (!spec.edge_types.empty() && spec.edge_types.size() + 1 != spec.node_types.size()) {
        field_error(field + ".edges", "needs one entry per hop");
      }
      c.meta_paths.push_back(std::move(spec));
    }
  }
  if (j.contains("model")) c.model = parse_model(j.at("model"));
  if (j.contains("teams")) c.teams = parse_teams(j.at("teams"));
  if (j.contains("fed")) c.fed = parse_fed(j.at("fed"));
  if (j.contains("sensitivity")) c.sensitivity = parse_sensitivity(j.at("sensitivity"));
  return c;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) raise(ErrorCode::ConfigError, "config file not found: " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_run_config(ss.str(), path.parent_path());
}

Mode parse_mode(const std::string& name) {
  static const std::map<std::string, Mode> modes{
      {"gen", Mode::Gen},         {"train", Mode::Train},         {"classify", Mode::Train},
      {"fedtrain", Mode::FedTrain}, {"embed", Mode::Embed},       {"influence", Mode::Influence},
      {"teams", Mode::Teams},     {"eval", Mode::Eval},           {"sensitivity", Mode::Sensitivity}};
  auto it = modes.find(name);
  if (it == modes.end()) raise(ErrorCode::ConfigError, "unknown mode '" + name + "'");
  return it->second;
}

std::string to_string(Mode mode) {
  switch (mode) {
    case Mode::Gen: return "gen";
    case Mode::Train: return "train";
    case Mode::FedTrain: return "fedtrain";
    case Mode::Embed: return "embed";
    case Mode::Influence: return "influence";
    case Mode::Teams: return "teams";
    case Mode::Eval: return "eval";
    case Mode::Sensitivity: return "sensitivity";
  }
  return "?";
}

ModelInputs build_inputs(const HeterogeneousGraph& g, const std::string& target_type,
                         const std::vector<MetaPathSpec>& meta_paths) {
  if (meta_paths.empty()) raise(ErrorCode::ConfigError, "meta_paths: at least one meta-path is required");
  const NodeTypeId target = g.require_node_type(target_type);
  std::vector<MetaPathAdjacency> adjs;
  for (const auto& spec : meta_paths) {
    const auto mp = MetaPath::from_names(g, spec.node_types, spec.edge_types);
    if (mp.start_type() != target) {
      raise(ErrorCode::ConfigError, "meta-path " + mp.name(g) + " does not start at target type '" + target_type + "'");
    }
    adjs.push_back(meta_path_adjacency(g, mp));
  }
  return ModelInputs(g, std::move(adjs));
}

LabelSet target_labels(const HeterogeneousGraph& g, const ModelInputs& inputs) {
  // Classes are the labels present on target nodes, in label-id order.
  std::set<LabelId> present;
  for (NodeId v : inputs.nodes()) {
    if (auto l = g.label(v)) present.insert(*l);
  }
  std::map<LabelId, int> cls;
  for (LabelId l : present) cls.emplace(l, static_cast<int>(cls.size()));
  LabelSet out;
  out.num_classes = cls.size();
  for (NodeId v : inputs.nodes()) {
    const auto l = g.label(v);
    out.labels.push_back(l ? cls.at(*l) : -1);
  }
  return out;
}

Split split_nodes(const ModelInputs& inputs, const NodeLabels& labels, std::uint64_t seed) {
  Split s;
  for (std::size_t i = 0; i < inputs.num_nodes(); ++i) {
    if (labels[i] < 0) continue;
    const double u = static_cast<double>(splitmix64(derive_seed(seed, "split", inputs.node(i))) >> 11) * 0x1.0p-53;
    (u < 0.6 ? s.train : u < 0.8 ? s.val : s.test).push_back(i);
  }
  return s;
}

std::vector<int> majority_baseline(const NodeLabels& labels, std::span<const std::size_t> train,
                                   std::span<const std::size_t> eval) {
  std::map<int, std::size_t> counts;
  for (std::size_t i : train) ++counts[labels[i]];
  int best = 0;
  std::size_t best_count = 0;
  for (const auto& [c, n] : counts) {
    if (n > best_count) {
      best = c;
      best_count = n;
    }
  }
  return std::vector<int>(eval.size(), best);
}

std::vector<int> degree_logistic_baseline(const HeterogeneousGraph& g, const ModelInputs& inputs,
                                          const LabelSet& labels, std::span<const std::size_t> train,
                                          std::span<const std::size_t> eval) {
  const std::size_t F = g.edge_type_names().size() + 1, L = labels.num_classes;
  auto raw_features = [&](std::size_t i) {
    std::vector<double> x(F, 1.0);
    for (std::size_t t = 0; t + 1 < F; ++t) {
      x[t] = static_cast<double>(g.degree(inputs.node(i), EdgeTypeId{static_cast<std::uint16_t>(t)}));
    }
    return x;
  };
  std::vector<double> mean(F, 0.0), sd(F, 1.0);
  for (std::size_t i : train) {
    const auto x = raw_features(i);
    for (std::size_t f = 0; f + 1 < F; ++f) mean[f] += x[f] / static_cast<double>(train.size());
  }
  for (std::size_t f = 0; f + 1 < F; ++f) {
    double var = 0.0;
    for (std::size_t i : train) var += std::pow(raw_features(i)[f] - mean[f], 2) / static_cast<double>(train.size());
    sd[f] = var > 0.0 ? std::sqrt(var) : 1.0;
  }
  auto features = [&](std::size_t i) {
    auto x = raw_features(i);
    for (std::size_t f = 0; f + 1 < F; ++f) x[f] = (x[f] - mean[f]) / sd[f];
    return x;
  };
  auto scores = [&](const std::vector<double>& W, const std::vector<double>& x) {
    std::vector<double> z(L, 0.0);
    for (std::size_t c = 0; c < L; ++c) {
      for (std::size_t f = 0; f < F; ++f) z[c] += W[c * F + f] * x[f];
    }
    const double mx = *std::max_element(z.begin(), z.end());
    double total = 0.0;
    for (double& v : z) total += (v = std::exp(v - mx));
    for (double& v : z) v /= total;
    return z;
  };

  std::vector<double> W(L * F, 0.0), grad(L * F);
  const double lr = 0.5, l2 = 1e-4;
  for (int iter = 0; iter < 500; ++iter) {
    std::fill(grad.begin(), grad.end(), 0.0);
    for (std::size_t i : train) {
      const auto x = features(i);
      const auto p = scores(W, x);
      for (std::size_t c = 0; c < L; ++c) {
        const double err = p[c] - (labels.labels[i] == static_cast<int>(c) ? 1.0 : 0.0);
        for (std::size_t f = 0; f < F; ++f) grad[c * F + f] += err * x[f];
      }
    }
    for (std::size_t k = 0; k < W.size(); ++k) W[k] -= lr * (grad[k] / static_cast<double>(train.size()) + l2 * W[k]);
  }
  std::vector<int> out;
  for (std::size_t i : eval) {
    const auto p = scores(W, features(i));
    out.push_back(static_cast<int>(std::max_element(p.begin(), p.end()) - p.begin()));
  }
  return out;
}

namespace {

F1Scores score_on(const std::vector<int>& predicted_all, const NodeLabels& labels, std::span<const std::size_t> nodes) {
  std::vector<int> pred, truth;
  for (std::size_t i : nodes) {
    pred.push_back(predicted_all[i]);
    truth.push_back(labels[i]);
  }
  return f1_scores(pred, truth);
}

F1Scores score_subset(const std::vector<int>& predicted, const NodeLabels& labels, std::span<const std::size_t> nodes) {
  std::vector<int> truth;
  for (std::size_t i : nodes) truth.push_back(labels[i]);
  return f1_scores(predicted, truth);
}

}  // namespace

ClassificationReport classify(const HeterogeneousGraph& g, const ModelInputs& inputs, const LabelSet& labels,
                              const Split& split, const Hyperparams& hp) {
  ClassificationReport r;
  r.model = train(inputs, labels.labels, split.train, labels.num_classes, hp);
  const auto predicted = predict(infer(inputs, r.model.params));
  r.ahine = score_on(predicted, labels.labels, split.test);
  r.majority = score_subset(majority_baseline(labels.labels, split.train, split.test), labels.labels, split.test);
  r.logistic =
      score_subset(degree_logistic_baseline(g, inputs, labels, split.train, split.test), labels.labels, split.test);
  return r;
}

TeamRun run_teams(const HeterogeneousGraph& g, const std::string& target_type,
                  const std::vector<MetaPathSpec>& meta_paths, const Hyperparams& hp, const IdentificationConfig& cfg) {
  cfg.validate();
  TeamRun run;
  run.filtered = prefilter_graph(g, cfg);
  const auto& fg = run.filtered.graph;
  const auto inputs = build_inputs(fg, target_type, meta_paths);
  const auto labels = target_labels(fg, inputs);
  const auto split = split_nodes(inputs, labels.labels, hp.seed);
  const auto model = train(inputs, labels.labels, split.train, labels.num_classes, hp);
  run.state = infer(inputs, model.params);
  run.influence = nac_influence(run.state, inputs);
  const auto neighbors = local_neighbor_lists(run.state.embeddings, run.filtered.coauthors);
  run.partition = identify_teams(run.state.embeddings, run.influence, run.state.attention, neighbors, cfg);
  return run;
}

TeamPartition to_original_ids(const TeamPartition& p, const PrefilterResult& filtered) {
  auto map = [&](NodeId v) { return filtered.new_to_old.at(v); };
  TeamPartition out;
  for (const auto& t : p.teams) {
    Team m{map(t.leader), {}, {}};
    for (NodeId v : t.core) m.core.push_back(map(v));
    for (NodeId v : t.non_core) m.non_core.push_back(map(v));
    out.teams.push_back(std::move(m));
  }
  for (NodeId v : p.residual) out.residual.push_back(map(v));
  return out;
}

std::map<NodeId, int> restrict_truth(const std::map<NodeId, int>& truth, const TeamPartition& p) {
  std::map<NodeId, int> out;
  auto keep = [&](NodeId v) {
    auto it = truth.find(v);
    if (it == truth.end()) raise(ErrorCode::UniverseMismatch, "node " + std::to_string(v) + " has no ground-truth team");
    out.emplace(v, it->second);
  };
  for (const auto& t : p.teams) {
    for (NodeId v : t.members()) keep(v);
  }
  for (NodeId v : p.residual) keep(v);
  return out;
}

namespace {

struct Loaded {
  HeterogeneousGraph graph;
  std::optional<std::map<NodeId, int>> truth;
};

Loaded load_graph(const RunConfig& cfg, std::uint64_t seed) {
  Loaded l;
  if (cfg.graph) {
    l.graph = read_graph(*cfg.graph);
  } else if (cfg.synthetic) {
    PlantedConfig pc = *cfg.synthetic;
    if (pc.seed == 0) pc.seed = seed;
    auto planted = gen_synthetic(pc);
    l.graph = std::move(planted.graph);
    l.truth = std::move(planted.truth);
  } else {
    field_error("graph", "required (or a synthetic block)");
  }
  if (cfg.truth) l.truth = read_truth(*cfg.truth);
  return l;
}

json f1_json(const F1Scores& f) { return {{"micro_f1", f.micro}, {"macro_f1", f.macro}}; }

class Outputs {
 public:
  explicit Outputs(std::filesystem::path dir) : dir_(std::move(dir)) {}
  std::filesystem::path file(const std::string& name) {
    names_.insert(name);
    return dir_ / name;
  }
  const std::set<std::string>& names() const { return names_; }
  const std::filesystem::path& dir() const { return dir_; }

 private:
  std::filesystem::path dir_;
  std::set<std::string> names_;
};

void write_loss_curve(const std::vector<double>& curve, const std::filesystem::path& path) {
  auto out = open_output(path);
  out << "step\tloss\n";
  for (std::size_t s = 0; s < curve.size(); ++s) out << s << '\t' << format_double(curve[s]) << '\n';
}

std::vector<std::size_t> nmi_levels(std::size_t teams) {
  std::vector<std::size_t> out;
  for (std::size_t k : {5, 10, 15, 20}) {
    if (k <= teams) out.push_back(k);
  }
  return out;
}

json write_nmi_table(const TeamPartition& p, const std::map<NodeId, int>& truth, const std::filesystem::path& path) {
  json m;
  auto out = open_output(path);
  out << "k\tnmi\n";
  for (std::size_t k : nmi_levels(p.teams.size())) {
    const double v = partition_nmi_top(p, truth, k);
    out << k << '\t' << format_double(v) << '\n';
    m["nmi_" + std::to_string(k)] = v;
  }
  const double all = partition_nmi(p, restrict_truth(truth, p));
  out << "all\t" << format_double(all) << '\n';
  m["nmi_all"] = all;
  return m;
}

std::vector<WorkerProfile> fed_profiles(const ModelInputs& inputs, const Split& split, std::size_t clients,
                                        const Hyperparams& hp, const std::vector<std::size_t>& periods) {
  auto profiles = hash_partition(inputs, split.train, clients, hp);
  for (std::size_t w = 0; w < profiles.size() && w < periods.size(); ++w) profiles[w].period = periods[w];
  for (const auto& p : profiles) {
    if (hp.batch_size > p.train_nodes.size()) {
      log::warn("worker " + std::to_string(p.worker_id) + ": batch size " + std::to_string(hp.batch_size) +
                " exceeds its " + std::to_string(p.train_nodes.size()) + " nodes; using full batch");
    }
  }
  return profiles;
}

json run_mode(const RunConfig& cfg, Mode mode, std::uint64_t seed, Outputs& out) {
  if (mode == Mode::Gen) {
    if (!cfg.synthetic) field_error("synthetic", "required for gen");
    PlantedConfig pc = *cfg.synthetic;
    if (pc.seed == 0) pc.seed = seed;
    const auto planted = gen_synthetic(pc);
    std::filesystem::create_directories(out.dir());
    write_graph(planted.graph, out.file("graph.tsv"));
    write_truth(planted.truth, out.file("truth.tsv"));
    return {{"nodes", planted.graph.num_nodes()},
            {"edges", planted.graph.num_edges()},
            {"authors", planted.authors.size()},
            {"teams", pc.teams}};
  }

  if (mode == Mode::Eval) {
    const auto report = cfg.team_report.value_or(cfg.out / "teams.tsv");
    if (!std::filesystem::exists(report)) field_error("team_report", "file not found: " + report.string());
    if (!cfg.truth) field_error("truth", "required for eval");
    const auto truth = read_truth(*cfg.truth);
    const auto partition = read_team_report(report);
    std::filesystem::create_directories(out.dir());
    return write_nmi_table(partition, truth, out.file("nmi.tsv"));
  }

  Hyperparams hp = cfg.model;
  hp.seed = seed;
  const Loaded loaded = load_graph(cfg, seed);
  const auto& g = loaded.graph;

  if (mode == Mode::Teams) {
    const auto run = run_teams(g, cfg.target_type, cfg.meta_paths, hp, cfg.teams);
    const auto partition = to_original_ids(run.partition, run.filtered);
    std::filesystem::create_directories(out.dir());
    write_team_report(partition, g, out.file("teams.tsv"));
    {
      auto s = open_output(out.file("team_summary.tsv"));
      s << "team_id\tleader\tsize\tcore\tnon_core\n";
      for (std::size_t t = 0; t < partition.teams.size(); ++t) {
        const auto& team = partition.teams[t];
        s << t << '\t' << team.leader << '\t' << team.size() << '\t' << team.core.size() << '\t'
          << team.non_core.size() << '\n';
      }
    }
    json m{{"teams", partition.teams.size()},
           {"residual", partition.residual.size()},
           {"authors_after_filter", run.state.embeddings.nodes.size()}};
    if (loaded.truth) m.update(write_nmi_table(partition, *loaded.truth, out.file("nmi.tsv")));
    return m;
  }

  const auto inputs = build_inputs(g, cfg.target_type, cfg.meta_paths);
  const auto labels = target_labels(g, inputs);
  const auto split = split_nodes(inputs, labels.labels, seed);
  json m{{"target_nodes", inputs.num_nodes()},
         {"classes", labels.num_classes},
         {"split", {{"train", split.train.size()}, {"val", split.val.size()}, {"test", split.test.size()}}}};

  switch (mode) {
    case Mode::Train: {
      const auto report = classify(g, inputs, labels, split, hp);
      std::filesystem::create_directories(out.dir());
      save_checkpoint(report.model.params, out.file("checkpoint.txt"));
      write_loss_curve(report.model.loss_curve, out.file("loss_curve.tsv"));
      auto t = open_output(out.file("classification.tsv"));
      t << "method\tmicro_f1\tmacro_f1\n";
      const std::pair<const char*, F1Scores> rows[] = {
          {"ahine", report.ahine}, {"majority", report.majority}, {"degree_logistic", report.logistic}};
      for (const auto& [name, f] : rows) t << name << '\t' << format_double(f.micro) << '\t' << format_double(f.macro) << '\n';
      m["ahine"] = f1_json(report.ahine);
      m["majority"] = f1_json(report.majority);
      m["degree_logistic"] = f1_json(report.logistic);
      return m;
    }
    case Mode::Embed: {
      ModelParams params;
      if (cfg.checkpoint) {
        params = load_checkpoint(*cfg.checkpoint);
      } else {
        params = train(inputs, labels.labels, split.train, labels.num_classes, hp).params;
      }
      const auto table = embed_all(inputs, params);
      std::filesystem::create_directories(out.dir());
      export_embeddings(table, out.file("embeddings.tsv"));
      export_embedding_labels(table, g, out.file("embedding_labels.tsv"));
      m["embedded_nodes"] = table.nodes.size();
      m["dim"] = table.dim;
      return m;
    }
    case Mode::Influence: {
      const auto model = train(inputs, labels.labels, split.train, labels.num_classes, hp);
      const auto state = infer(inputs, model.params);
      const auto nac = nac_influence(state, inputs);
      const std::vector<std::string> apa{cfg.teams.author_type, cfg.teams.paper_type, cfg.teams.author_type};
      const auto projection = projection_graph(meta_path_adjacency(g, MetaPath::from_names(g, apa)));
      if (projection.nodes != nac.nodes) raise(ErrorCode::ConfigError, "target_type must match teams.author_type for influence");
      std::vector<InfluenceScores> structural;
      for (auto k : {InfluenceMethod::DC, InfluenceMethod::BC, InfluenceMethod::CC, InfluenceMethod::EC}) {
        structural.push_back(centrality(projection, k));
      }
      std::filesystem::create_directories(out.dir());
      {
        auto s = open_output(out.file("influence_scores.tsv"));
        s << "node_id\tnac\tdc\tbc\tcc\tec\n";
        for (std::size_t i = 0; i < nac.nodes.size(); ++i) {
          s << nac.nodes[i] << '\t' << format_double(nac.scores[i]);
          for (const auto& sc : structural) s << '\t' << format_double(sc.scores[i]);
          s << '\n';
        }
      }
      auto t = open_output(out.file("influence_intersection.tsv"));
      t << "method\tk\tintersection\n";
      for (const auto& sc : structural) {
        for (std::size_t k : {5, 10, 15, 20, 25}) {
          if (k > nac.nodes.size()) continue;
          const double v = topk_intersection(nac, sc, k);
          t << to_string(sc.method) << '\t' << k << '\t' << format_double(v) << '\n';
          m["intersection"][std::string(to_string(sc.method))][std::to_string(k)] = v;
        }
      }
      return m;
    }
    case Mode::FedTrain: {
      const auto profiles = fed_profiles(inputs, split, cfg.fed.clients, hp, cfg.fed.periods);
      SimulationConfig sc{cfg.fed.rounds, cfg.fed.alpha, cfg.fed.threshold, cfg.fed.asynchronous};
      const auto initial =
          ModelParams::initialize(inputs.num_nodes(), inputs.num_meta_paths(), labels.num_classes, hp);
      const auto result = run_simulation(inputs, labels.labels, labels.num_classes, profiles, sc, initial, split.train,
                                         split.val);
      std::filesystem::create_directories(out.dir());
      {
        auto r = open_output(out.file("fed_rounds.tsv"));
        write_round_metrics(result.rounds, r);
      }
      {
        auto w = open_output(out.file("fed_worker_loss.tsv"));
        w << "worker\tstep\tloss\n";
        for (std::size_t k = 0; k < result.worker_loss_curves.size(); ++k) {
          const auto& curve = result.worker_loss_curves[k];
          for (std::size_t s = 0; s < curve.size(); ++s) w << k << '\t' << s << '\t' << format_double(curve[s]) << '\n';
        }
      }
      save_checkpoint(result.global, out.file("checkpoint.txt"));
      const auto predicted = predict(infer(inputs, result.global));
      m["test"] = f1_json(score_on(predicted, labels.labels, split.test));
      m["final_version"] = result.final_version;
      m["clients"] = profiles.size();
      return m;
    }
    case Mode::Sensitivity: {
      const auto& s = cfg.sensitivity;
      std::filesystem::create_directories(out.dir() / "sensitivity");
      auto summary = open_output(out.file("sensitivity.tsv"));
      summary << "epochs\tbatch_size\tfinal_loss\tfinal_val_micro_f1\ttest_micro_f1\n";
      std::size_t cell = 0;
      for (std::size_t e : s.epochs) {
        for (std::size_t B : s.batch_sizes) {
          Hyperparams chp = hp;
          chp.local_epochs = e;
          chp.batch_size = B;
          chp.seed = derive_seed(seed, "sensitivity", cell++);
          const auto profiles = fed_profiles(inputs, split, s.clients, chp, {});
          const auto initial =
              ModelParams::initialize(inputs.num_nodes(), inputs.num_meta_paths(), labels.num_classes, chp);
          const auto result = run_simulation(inputs, labels.labels, labels.num_classes, profiles,
                                             SimulationConfig{s.rounds, cfg.fed.alpha, cfg.fed.threshold, false},
                                             initial, split.train, split.val);
          const std::string name = "sensitivity/e" + std::to_string(e) + "_B" + std::to_string(B) + ".tsv";
          {
            auto f = open_output(out.file(name));
            f << "round\tglobal_loss\tval_micro_f1\n";
            for (const auto& r : result.rounds) {
              f << r.round << '\t' << format_double(r.global_loss) << '\t' << format_double(r.val_micro_f1) << '\n';
            }
          }
          const auto test = score_on(predict(infer(inputs, result.global)), labels.labels, split.test);
          summary << e << '\t' << B << '\t' << format_double(result.rounds.back().global_loss) << '\t'
                  << format_double(result.rounds.back().val_micro_f1) << '\t' << format_double(test.micro) << '\n';
          m["cells"].push_back({{"epochs", e}, {"batch_size", B}, {"test_micro_f1", test.micro}});
        }
      }
      return m;
    }
    default:
      break;
  }
  raise(ErrorCode::ConfigError, "unhandled mode");
}

std::string timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream ss;
  ss << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return ss.str();
}

}  // namespace

std::string run_pipeline(const RunConfig& cfg, Mode mode) {
  if (!cfg.seed) field_error("seed", "required (set it in the config or pass --seed)");
  const std::uint64_t seed = *cfg.seed;
  Outputs out(cfg.out);
  const std::string started = timestamp();
  const json metrics = run_mode(cfg, mode, seed, out);

  json manifest;
  manifest["schema_version"] = kConfigSchemaVersion;
  manifest["mode"] = to_string(mode);
  manifest["seed"] = seed;
  manifest["config"] = cfg.source_text.empty() ? json(nullptr) : json::parse(cfg.source_text);
  manifest["metrics"] = metrics;
  manifest["outputs"] = json(out.names());
  {
    auto f = open_output(out.dir() / "manifest.json");
    f << manifest.dump(2) << '\n';
  }
  {
    auto f = open_output(out.dir() / "run.log");
    f << "started\t" << started << "\nfinished\t" << timestamp() << "\nmode\t" << to_string(mode) << '\n';
  }
  return metrics.dump();
}

}  // namespace hinforge
