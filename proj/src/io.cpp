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

#include "hinforge/io.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "hinforge/error.hpp"
#include "hinforge/format.hpp"

namespace hinforge {

namespace {

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) raise(ErrorCode::IoError, "cannot read " + path.string());
  return in;
}

std::string dash_if_empty(const std::string& s) { return s.empty() ? "-" : s; }

std::optional<std::string> none_if_dash(std::string_view s) {
  if (s.empty() || s == "-") return std::nullopt;
  return std::string(s);
}

NodeId parse_node(std::string_view s, std::size_t line) {
  try {
    const auto v = parse_int(s);
    if (v < 0 || v > static_cast<long long>(std::numeric_limits<NodeId>::max())) throw Error(ErrorCode::ParseError, "");
    return static_cast<NodeId>(v);
  } catch (const Error&) {
    raise(ErrorCode::ParseError, "line " + std::to_string(line) + ": bad node id '" + std::string(s) + "'");
  }
}

}  // namespace

std::ofstream open_output(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) raise(ErrorCode::IoError, "cannot write " + path.string());
  return out;
}

void write_graph(const HeterogeneousGraph& g, std::ostream& out) {
  const RawGraph raw = g.to_raw();
  for (const auto& [name, ends] : raw.schema) out << "S\t" << name << '\t' << ends.first << '\t' << ends.second << '\n';
  for (const auto& n : raw.nodes) {
    out << "N\t" << n.id << '\t' << n.type << '\t' << dash_if_empty(n.label.value_or("")) << '\t'
        << dash_if_empty(n.display_name.value_or("")) << '\n';
  }
  for (const auto& e : raw.edges) out << "E\t" << e.src << '\t' << e.dst << '\t' << e.type << '\n';
}

void write_graph(const HeterogeneousGraph& g, const std::filesystem::path& path) {
  auto out = open_output(path);
  write_graph(g, out);
  if (!out) raise(ErrorCode::IoError, "failed writing " + path.string());
}

HeterogeneousGraph read_graph(std::istream& in) {
  RawGraph raw;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty() || line.front() == '#') continue;
    const auto f = split(line, '\t');
    auto need = [&](std::size_t k) {
      if (f.size() != k) {
        raise(ErrorCode::ParseError, "line " + std::to_string(lineno) + ": expected " + std::to_string(k) + " fields");
      }
    };
    if (f[0] == "S") {
      need(4);
      raw.schema[std::string(f[1])] = {std::string(f[2]), std::string(f[3])};
    } else if (f[0] == "N") {
      if (f.size() < 3 || f.size() > 5) raise(ErrorCode::ParseError, "line " + std::to_string(lineno) + ": bad node record");
      raw.add_node(parse_node(f[1], lineno), std::string(f[2]), f.size() > 3 ? none_if_dash(f[3]) : std::nullopt,
                   f.size() > 4 ? none_if_dash(f[4]) : std::nullopt);
    } else if (f[0] == "E") {
      need(4);
      raw.add_edge(parse_node(f[1], lineno), parse_node(f[2], lineno), std::string(f[3]));
    } else {
      raise(ErrorCode::ParseError, "line " + std::to_string(lineno) + ": unknown record '" + std::string(f[0]) + "'");
    }
  }
  return freeze_graph(raw);
}

HeterogeneousGraph read_graph(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_graph(in);
}

void write_truth(const std::map<NodeId, int>& truth, const std::filesystem::path& path) {
  auto out = open_output(path);
  out << "node_id\tteam_id\n";
  for (const auto& [v, t] : truth) out << v << '\t' << t << '\n';
}

std::map<NodeId, int> read_truth(const std::filesystem::path& path) {
  auto in = open_input(path);
  std::map<NodeId, int> truth;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty() || line.front() == '#') continue;
    const auto f = split(line, '\t');
    if (f.size() != 2) raise(ErrorCode::ParseError, path.string() + ":" + std::to_string(lineno) + ": expected 2 fields");
    if (truth.empty() && f[0] == "node_id") continue;  // optional header
    const NodeId v = parse_node(f[0], lineno);
    if (!truth.emplace(v, static_cast<int>(parse_int(f[1]))).second) {
      raise(ErrorCode::DuplicateNodeId, path.string() + ": node " + std::to_string(v) + " listed twice");
    }
  }
  return truth;
}

void export_embeddings(const EmbeddingTable& table, const std::filesystem::path& path) {
  std::vector<std::size_t> order(table.nodes.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return table.nodes[a] < table.nodes[b]; });
  auto out = open_output(path);
  out << "node_id";
  for (std::size_t k = 0; k < table.dim; ++k) out << "\tdim" << k;
  out << '\n';
  for (std::size_t i : order) {
    out << table.nodes[i];
    for (double v : table.fused.at(i)) out << '\t' << format_double(v);
    out << '\n';
  }
  if (!out) raise(ErrorCode::IoError, "failed writing " + path.string());
}

void export_embedding_labels(const EmbeddingTable& table, const HeterogeneousGraph& g,
                             const std::filesystem::path& path) {
  std::vector<NodeId> ids = table.nodes;
  std::sort(ids.begin(), ids.end());
  auto out = open_output(path);
  out << "node_id\tlabel\n";
  for (NodeId v : ids) {
    const auto label = g.label(v);
    out << v << '\t' << (label ? g.label_names().name(static_cast<std::uint16_t>(*label)) : std::string("-")) << '\n';
  }
}

std::map<NodeId, std::vector<double>> read_embeddings(const std::filesystem::path& path) {
  auto in = open_input(path);
  std::string line;
  if (!std::getline(in, line)) raise(ErrorCode::ParseError, path.string() + ": missing header");
  const std::size_t dim = split(line, '\t').size() - 1;
  std::map<NodeId, std::vector<double>> out;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto f = split(line, '\t');
    if (f.size() != dim + 1) raise(ErrorCode::ParseError, path.string() + ":" + std::to_string(lineno) + ": wrong column count");
    std::vector<double> row;
    for (std::size_t k = 1; k < f.size(); ++k) row.push_back(parse_double(f[k]));
    out[parse_node(f[0], lineno)] = std::move(row);
  }
  return out;
}

void write_team_report(const TeamPartition& p, const HeterogeneousGraph& g, const std::filesystem::path& path) {
  auto out = open_output(path);
  out << "team_id\trole\tnode_id\tdisplay_name\n";
  auto row = [&](std::size_t t, const char* role, NodeId v) {
    out << t << '\t' << role << '\t' << v << '\t' << dash_if_empty(g.display_name(v)) << '\n';
  };
  for (std::size_t t = 0; t < p.teams.size(); ++t) {
    row(t, "leader", p.teams[t].leader);
    for (NodeId v : p.teams[t].core) row(t, "core", v);
    for (NodeId v : p.teams[t].non_core) row(t, "non_core", v);
  }
  for (NodeId v : p.residual) out << "-\tresidual\t" << v << '\t' << dash_if_empty(g.display_name(v)) << '\n';
}

TeamPartition read_team_report(const std::filesystem::path& path) {
  auto in = open_input(path);
  std::string line;
  std::getline(in, line);
  TeamPartition p;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto f = split(line, '\t');
    if (f.size() != 4) raise(ErrorCode::ParseError, path.string() + ":" + std::to_string(lineno) + ": expected 4 fields");
    const NodeId v = parse_node(f[2], lineno);
    if (f[1] == "residual") {
      p.residual.push_back(v);
      continue;
    }
    const auto t = static_cast<std::size_t>(parse_int(f[0]));
    if (f[1] == "leader") {
      if (t != p.teams.size()) raise(ErrorCode::ParseError, path.string() + ":" + std::to_string(lineno) + ": teams out of order");
      p.teams.push_back(Team{v, {}, {}});
    } else if (t + 1 != p.teams.size()) {
      raise(ErrorCode::ParseError, path.string() + ":" + std::to_string(lineno) + ": member before its leader");
    } else if (f[1] == "core") {
      p.teams.back().core.push_back(v);
    } else if (f[1] == "non_core") {
      p.teams.back().non_core.push_back(v);
    } else {
      raise(ErrorCode::ParseError, path.string() + ":" + std::to_string(lineno) + ": unknown role '" + std::string(f[1]) + "'");
    }
  }
  return p;
}

}  // namespace hinforge
