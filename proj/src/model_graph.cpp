/* Copyright 2026 The EdgeSlice Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include "edgeslice/model_graph.hpp"

#include <algorithm>
#include <fstream>
#include <queue>
#include <sstream>

#include "edgeslice/errors.hpp"
#include "json.hpp"

namespace edgeslice {

using json = nlohmann::json;

ModelGraph ModelGraph::build(std::vector<Layer> layers,
                             const std::vector<LayerEdge>& edges) {
  ModelGraph g;
  if (layers.empty()) throw ValidationError("model has no layers");
  for (LayerIndex i = 0; i < layers.size(); ++i) {
    const Layer& l = layers[i];
    if (l.id.empty()) throw ValidationError("layer with empty id");
    if (!g.index_.emplace(l.id, i).second) {
      throw ValidationError("duplicate layer id '" + l.id + "'");
    }
    if (l.output_elements < 1) {
      throw ValidationError("layer '" + l.id + "' has output_elements < 1");
    }
    if (l.memory_bytes < 0) {
      throw ValidationError("layer '" + l.id + "' has negative memory_bytes");
    }
  }
  g.layers_ = std::move(layers);
  const std::size_t n = g.layers_.size();
  g.successors_.assign(n, {});
  g.predecessors_.assign(n, {});

  for (const LayerEdge& e : edges) {
    const auto from = g.index_.find(e.from);
    const auto to = g.index_.find(e.to);
    if (from == g.index_.end()) {
      throw ValidationError("edge references unknown layer '" + e.from + "'");
    }
    if (to == g.index_.end()) {
      throw ValidationError("edge references unknown layer '" + e.to + "'");
    }
    if (from->second == to->second) {
      throw ValidationError("cycle: self-loop on layer '" + e.from + "'");
    }
    auto& succ = g.successors_[from->second];
    if (std::find(succ.begin(), succ.end(), to->second) != succ.end()) continue;
    succ.push_back(to->second);
    g.predecessors_[to->second].push_back(from->second);
    ++g.edge_count_;
  }
  for (auto& s : g.successors_) std::sort(s.begin(), s.end());
  for (auto& p : g.predecessors_) std::sort(p.begin(), p.end());

  std::vector<LayerIndex> sources;
  std::vector<LayerIndex> sinks;
  for (LayerIndex i = 0; i < n; ++i) {
    if (g.predecessors_[i].empty()) sources.push_back(i);
    if (g.successors_[i].empty()) sinks.push_back(i);
  }

  // Kahn with a min-heap for a reproducible order.
  std::vector<std::size_t> indegree(n);
  std::priority_queue<LayerIndex, std::vector<LayerIndex>, std::greater<>>
      ready;
  for (LayerIndex i = 0; i < n; ++i) {
    indegree[i] = g.predecessors_[i].size();
    if (indegree[i] == 0) ready.push(i);
  }
  while (!ready.empty()) {
    const LayerIndex v = ready.top();
    ready.pop();
    g.topo_.push_back(v);
    for (LayerIndex w : g.successors_[v]) {
      if (--indegree[w] == 0) ready.push(w);
    }
  }
  if (g.topo_.size() != n) {
    for (LayerIndex i = 0; i < n; ++i) {
      if (indegree[i] > 0) {
        throw ValidationError("cycle through layer '" + g.layers_[i].id + "'");
      }
    }
  }

  auto join_ids = [&](const std::vector<LayerIndex>& v) {
    std::string out;
    for (LayerIndex i : v) {
      if (!out.empty()) out += ", ";
      out += "'" + g.layers_[i].id + "'";
    }
    return out;
  };
  if (sources.size() != 1) {
    throw ValidationError("expected exactly one source, found " +
                          std::to_string(sources.size()) + ": " +
                          join_ids(sources));
  }
  if (sinks.size() != 1) {
    throw ValidationError("expected exactly one sink, found " +
                          std::to_string(sinks.size()) + ": " +
                          join_ids(sinks));
  }
  g.source_ = sources.front();
  g.sink_ = sinks.front();

  // With one source and one sink in a DAG these always hold; kept as explicit
  // checks so a future relaxation of the rules above cannot skip them.
  std::vector<char> seen(n, 0);
  std::vector<LayerIndex> stack{g.source_};
  seen[g.source_] = 1;
  while (!stack.empty()) {
    const LayerIndex v = stack.back();
    stack.pop_back();
    for (LayerIndex w : g.successors_[v]) {
      if (!seen[w]) {
        seen[w] = 1;
        stack.push_back(w);
      }
    }
  }
  for (LayerIndex i = 0; i < n; ++i) {
    if (!seen[i]) {
      throw ValidationError("layer '" + g.layers_[i].id +
                            "' is unreachable from the source");
    }
  }
  return g;
}

LayerIndex ModelGraph::index_of(std::string_view id) const {
  const auto it = index_.find(std::string(id));
  if (it == index_.end()) {
    throw ValidationError("unknown layer '" + std::string(id) + "'");
  }
  return it->second;
}

ModelGraph parse_model_graph(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("model file is not valid JSON: ") + e.what());
  }
  std::vector<Layer> layers;
  std::vector<LayerEdge> edges;
  try {
    if (!doc.is_object() || doc.value("format", "") != kModelFormat) {
      throw ParseError("model file must declare format \"" +
                       std::string(kModelFormat) + "\"");
    }
    for (const json& l : doc.at("layers")) {
      layers.push_back(Layer{l.at("id").get<std::string>(),
                             l.at("output_elements").get<std::int64_t>(),
                             l.at("memory_bytes").get<std::int64_t>()});
    }
    for (const json& e : doc.at("edges")) {
      edges.push_back(
          LayerEdge{e.at("from").get<std::string>(), e.at("to").get<std::string>()});
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed model file: ") + e.what());
  }
  return ModelGraph::build(std::move(layers), edges);
}

ModelGraph load_model_graph(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open model file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_model_graph(buf.str());
}

std::string dump_model_graph(const ModelGraph& g) {
  json doc;
  doc["format"] = kModelFormat;
  json layers = json::array();
  for (const Layer& l : g.layers()) {
    layers.push_back({{"id", l.id},
                      {"output_elements", l.output_elements},
                      {"memory_bytes", l.memory_bytes}});
  }
  json edges = json::array();
  for (LayerIndex v = 0; v < g.size(); ++v) {
    for (LayerIndex w : g.successors(v)) {
      edges.push_back({{"from", g.layer(v).id}, {"to", g.layer(w).id}});
    }
  }
  doc["layers"] = std::move(layers);
  doc["edges"] = std::move(edges);
  return doc.dump(2);
}

std::vector<int> longest_path_depths(const ModelGraph& g) {
  std::vector<int> depth(g.size(), 0);
  for (LayerIndex v : g.topological_order()) {
    for (LayerIndex w : g.successors(v)) {
      depth[w] = std::max(depth[w], depth[v] + 1);
    }
  }
  return depth;
}

bool all_paths_through(const ModelGraph& g, const std::vector<int>& depths,
                       LayerIndex from, LayerIndex to) {
  if (from == to) return true;
  const int limit = depths[to];
  // A layer already expanded cannot lead anywhere new, so each is visited at
  // most once.
  std::vector<char> visited(g.size(), 0);
  std::vector<LayerIndex> stack{from};
  visited[from] = 1;
  while (!stack.empty()) {
    const LayerIndex v = stack.back();
    stack.pop_back();
    if (g.successors(v).empty()) return false;  // a path ended before `to`
    for (LayerIndex w : g.successors(v)) {
      if (w == to) continue;
      if (depths[w] > limit) return false;
      if (!visited[w]) {
        visited[w] = 1;
        stack.push_back(w);
      }
    }
  }
  return true;
}

bool CandidatePoints::partitionable(const ModelGraph& g) const {
  for (LayerIndex p : points) {
    if (p != g.source() && p != g.sink()) return true;
  }
  return false;
}

CandidatePoints candidate_partition_points(const ModelGraph& g) {
  CandidatePoints out;
  out.depths = longest_path_depths(g);
  const int max_depth = *std::max_element(out.depths.begin(), out.depths.end());
  std::vector<int> count(static_cast<std::size_t>(max_depth) + 1, 0);
  std::vector<LayerIndex> at_depth(count.size(), 0);
  for (LayerIndex v = 0; v < g.size(); ++v) {
    ++count[out.depths[v]];
    at_depth[out.depths[v]] = v;
  }
  out.points.push_back(g.source());
  for (std::size_t d = 1; d < count.size(); ++d) {
    if (count[d] != 1) continue;
    const LayerIndex u = at_depth[d];
    if (all_paths_through(g, out.depths, out.points.back(), u)) {
      out.points.push_back(u);
    }
  }
  return out;
}

}  // namespace edgeslice
