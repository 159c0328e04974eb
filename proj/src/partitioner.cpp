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

#include "edgeslice/partitioner.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

#include "edgeslice/errors.hpp"
#include "json.hpp"

namespace edgeslice {

using json = nlohmann::json;

double transfer_size(const Layer& layer, double compression_ratio,
                     int bytes_per_element) {
  if (!(compression_ratio > 0.0)) {
    throw std::invalid_argument("compression ratio must be positive");
  }
  return static_cast<double>(layer.output_elements) * bytes_per_element /
         compression_ratio;
}

TransferClassifier::TransferClassifier(std::vector<double> breakpoints)
    : breakpoints_(std::move(breakpoints)) {
  for (std::size_t i = 1; i < breakpoints_.size(); ++i) {
    if (!(breakpoints_[i - 1] < breakpoints_[i])) {
      throw std::invalid_argument("breakpoints must be strictly increasing");
    }
  }
}

int TransferClassifier::classify(double size) const {
  return static_cast<int>(
      std::upper_bound(breakpoints_.begin(), breakpoints_.end(), size) -
      breakpoints_.begin());
}

TransferClassifier fit_classifier(std::span<const double> sizes,
                                  int n_classes) {
  if (sizes.empty()) throw std::invalid_argument("no sizes to classify");
  if (n_classes < 1) throw std::invalid_argument("need at least one class");
  std::vector<double> sorted(sizes.begin(), sizes.end());
  std::sort(sorted.begin(), sorted.end());
  const std::size_t m = sorted.size();
  std::vector<double> breakpoints;
  for (int c = 1; c < n_classes; ++c) {
    const double bp = sorted[static_cast<std::size_t>(c) * m /
                             static_cast<std::size_t>(n_classes)];
    // A breakpoint at or below the minimum would leave an empty lowest class.
    if (bp <= sorted.front()) continue;
    if (!breakpoints.empty() && bp <= breakpoints.back()) continue;
    breakpoints.push_back(bp);
  }
  return TransferClassifier(std::move(breakpoints));
}

std::size_t PartitionGraph::edge_count() const {
  std::size_t n = 0;
  for (const auto& c : children_) n += c.size();
  return n;
}

std::vector<std::size_t> PartitionGraph::roots() const {
  std::vector<std::size_t> out;
  for (std::size_t v = 0; v < vertices_.size(); ++v) {
    if (vertices_[v].range.first == 0) out.push_back(v);
  }
  return out;
}

std::vector<std::size_t> PartitionGraph::leaves() const {
  std::vector<std::size_t> out;
  for (std::size_t v = 0; v < vertices_.size(); ++v) {
    if (children_[v].empty()) out.push_back(v);
  }
  return out;
}

std::int64_t PartitionGraph::range_memory(std::size_t first,
                                          std::size_t last) const {
  return memory_prefix_[last + 1] - memory_prefix_[first];
}

std::size_t PartitionGraph::max_fitting_last(std::size_t first) const {
  std::size_t last = first;
  while (last + 1 < point_count() && fits(first, last + 1)) ++last;
  return last;
}

double PartitionGraph::transfer_bytes(std::size_t point) const {
  return static_cast<double>(point_elements_[point]) *
         options_.bytes_per_element / options_.compression_ratio;
}

std::vector<double> PartitionGraph::candidate_transfer_sizes() const {
  std::vector<double> out(point_count());
  for (std::size_t k = 0; k < point_count(); ++k) out[k] = transfer_bytes(k);
  return out;
}

PartitionGraph build_partition_graph(const CandidatePoints& points,
                                     const ModelGraph& g,
                                     std::int64_t capacity_bytes,
                                     const PartitionOptions& options) {
  if (points.points.empty()) {
    throw std::invalid_argument("no candidate partition points");
  }
  if (!(options.compression_ratio > 0.0) || options.bytes_per_element < 1) {
    throw std::invalid_argument("invalid transfer-size options");
  }
  PartitionGraph pg;
  pg.capacity_bytes_ = capacity_bytes;
  pg.options_ = options;
  const std::size_t n = points.size();
  for (LayerIndex p : points.points) {
    pg.point_ids_.push_back(g.layer(p).id);
    pg.point_elements_.push_back(g.layer(p).output_elements);
  }

  // Band k holds layers with depth in (depth(p_{k-1}), depth(p_k)].
  std::vector<std::int64_t> band(n, 0);
  for (LayerIndex v = 0; v < g.size(); ++v) {
    const int d = points.depths[v];
    std::size_t k = 0;
    while (k + 1 < n && points.depth_of_point(k) < d) ++k;
    band[k] += g.layer(v).memory_bytes;
  }
  pg.memory_prefix_.assign(n + 1, 0);
  for (std::size_t k = 0; k < n; ++k) {
    pg.memory_prefix_[k + 1] = pg.memory_prefix_[k] + band[k];
  }
  for (std::size_t k = 0; k < n; ++k) {
    if (!pg.fits(k, k)) {
      throw InfeasibleError(
          "model cannot be partitioned at capacity " +
          std::to_string(capacity_bytes) + " bytes: the band ending at '" +
          pg.point_ids_[k] + "' needs " + std::to_string(band[k]) + " bytes");
    }
  }

  std::vector<std::size_t> first_vertex(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i) {
    first_vertex[i] = pg.vertices_.size();
    for (std::size_t j = i; j < n && pg.fits(i, j); ++j) {
      pg.vertices_.push_back({PointRange{i, j}, pg.range_memory(i, j)});
    }
  }
  first_vertex[n] = pg.vertices_.size();
  pg.children_.assign(pg.vertices_.size(), {});
  for (std::size_t v = 0; v < pg.vertices_.size(); ++v) {
    const std::size_t next = pg.vertices_[v].range.last + 1;
    if (next >= n) continue;
    for (std::size_t c = first_vertex[next]; c < first_vertex[next + 1]; ++c) {
      pg.children_[v].push_back(c);
    }
  }
  return pg;
}

std::vector<PointRange> PartitionScheme::ranges() const {
  std::vector<PointRange> out;
  for (const Partition& p : partitions) {
    if (!p.is_dispatcher) out.push_back(p.range);
  }
  return out;
}

PartitionScheme make_scheme(const PartitionGraph& graph,
                            std::span<const PointRange> ranges,
                            const TransferClassifier& classifier) {
  if (ranges.empty()) throw std::invalid_argument("empty partitioning");
  std::size_t expected = 0;
  for (const PointRange& r : ranges) {
    if (r.first != expected || r.last < r.first ||
        r.last >= graph.point_count()) {
      throw std::invalid_argument("ranges must tile the candidate points");
    }
    if (!graph.fits(r.first, r.last)) {
      throw InfeasibleError("partition [" + graph.point_id(r.first) + " .. " +
                            graph.point_id(r.last) + "] exceeds capacity");
    }
    expected = r.last + 1;
  }
  if (expected != graph.point_count()) {
    throw std::invalid_argument("ranges must tile the candidate points");
  }

  PartitionScheme scheme;
  scheme.capacity_bytes = graph.capacity_bytes();
  Partition dispatcher;
  dispatcher.is_dispatcher = true;
  dispatcher.boundary_point = 0;
  dispatcher.boundary_id = graph.point_id(0);
  dispatcher.transfer_bytes = graph.transfer_bytes(0);
  scheme.partitions.push_back(dispatcher);
  for (std::size_t i = 0; i < ranges.size(); ++i) {
    const PointRange& r = ranges[i];
    Partition p;
    p.range = r;
    p.memory_bytes = graph.range_memory(r.first, r.last);
    p.boundary_point = r.last;
    p.boundary_id = graph.point_id(r.last);
    p.transfer_bytes = graph.transfer_bytes(r.last);
    if (i + 1 < ranges.size()) scheme.total_cost_bytes += p.transfer_bytes;
    scheme.partitions.push_back(p);
  }
  for (const Partition& p : scheme.partitions) {
    scheme.transfer_sizes.push_back(p.transfer_bytes);
  }
  relabel(scheme, classifier);
  return scheme;
}

void relabel(PartitionScheme& scheme, const TransferClassifier& classifier) {
  scheme.n_classes = classifier.n_classes();
  scheme.breakpoints = classifier.breakpoints();
  scheme.classes.clear();
  for (Partition& p : scheme.partitions) {
    p.transfer_class = classifier.classify(p.transfer_bytes);
    scheme.classes.push_back(p.transfer_class);
  }
}

namespace {

struct PathResult {
  bool ok = false;
  std::int64_t cost = 0;  // summed transfer elements, exact
  std::vector<std::size_t> path;
};

class MinCostPath {
 public:
  MinCostPath(const PartitionGraph& g, bool memoize)
      : g_(g), memoize_(memoize) {}

  bool better(const PathResult& a, const PathResult& b) const {
    if (a.ok != b.ok) return a.ok;
    if (a.cost != b.cost) return a.cost < b.cost;
    if (a.path.size() != b.path.size()) return a.path.size() < b.path.size();
    for (std::size_t i = 0; i < a.path.size(); ++i) {
      const std::size_t la = g_.vertices()[a.path[i]].range.last;
      const std::size_t lb = g_.vertices()[b.path[i]].range.last;
      if (la != lb) return la < lb;
    }
    return false;
  }

  PathResult from(std::size_t v) {
    const PointRange& range = g_.vertices()[v].range;
    if (range.last + 1 == g_.point_count()) return {true, 0, {v}};
    if (g_.children(v).empty()) return {};

    // Every child of v starts right after v's last point, so the best
    // continuation depends only on that point.
    const std::size_t key = range.last;
    PathResult best;
    if (auto it = memo_.find(key); memoize_ && it != memo_.end()) {
      best = it->second;
    } else {
      for (std::size_t c : g_.children(v)) {
        PathResult candidate = from(c);
        if (better(candidate, best)) best = std::move(candidate);
      }
      if (memoize_) memo_.emplace(key, best);
    }
    if (!best.ok) return {};
    PathResult out;
    out.ok = true;
    out.cost = best.cost + g_.transfer_elements(range.last);
    out.path.reserve(best.path.size() + 1);
    out.path.push_back(v);
    out.path.insert(out.path.end(), best.path.begin(), best.path.end());
    return out;
  }

 private:
  const PartitionGraph& g_;
  bool memoize_;
  std::map<std::size_t, PathResult> memo_;
};

}  // namespace

PartitionScheme optimal_partition(const PartitionGraph& graph,
                                  const TransferClassifier& classifier,
                                  const OptimizeOptions& options) {
  MinCostPath solver(graph, options.memoize);
  PathResult best;
  for (std::size_t r : graph.roots()) {
    PathResult candidate = solver.from(r);
    if (solver.better(candidate, best)) best = std::move(candidate);
  }
  if (!best.ok) {
    throw InfeasibleError("partition graph has no root-to-leaf path");
  }
  std::vector<PointRange> ranges;
  for (std::size_t v : best.path) ranges.push_back(graph.vertices()[v].range);
  return make_scheme(graph, ranges, classifier);
}

std::string dump_scheme(const PartitionScheme& scheme) {
  json doc;
  doc["format"] = kPartsFormat;
  doc["n_classes"] = scheme.n_classes;
  doc["breakpoints"] = scheme.breakpoints;
  doc["total_cost_bytes"] = scheme.total_cost_bytes;
  if (scheme.capacity_bytes == kUnlimitedCapacity) {
    doc["capacity_bytes"] = nullptr;
  } else {
    doc["capacity_bytes"] = scheme.capacity_bytes;
  }
  json parts = json::array();
  for (const Partition& p : scheme.partitions) {
    json j;
    j["dispatcher"] = p.is_dispatcher;
    if (!p.is_dispatcher) {
      j["first_point"] = p.range.first;
      j["last_point"] = p.range.last;
    }
    j["memory_bytes"] = p.memory_bytes;
    j["boundary_point"] = p.boundary_point;
    j["boundary"] = p.boundary_id;
    j["transfer_bytes"] = p.transfer_bytes;
    j["class"] = p.transfer_class;
    parts.push_back(std::move(j));
  }
  doc["partitions"] = std::move(parts);
  return doc.dump(2);
}

PartitionScheme parse_scheme(std::string_view text) {
  PartitionScheme scheme;
  try {
    const json doc = json::parse(text);
    if (doc.value("format", "") != kPartsFormat) {
      throw ParseError("scheme must declare format \"" +
                       std::string(kPartsFormat) + "\"");
    }
    scheme.n_classes = doc.at("n_classes").get<int>();
    scheme.breakpoints = doc.at("breakpoints").get<std::vector<double>>();
    scheme.total_cost_bytes = doc.at("total_cost_bytes").get<double>();
    const json& cap = doc.at("capacity_bytes");
    scheme.capacity_bytes =
        cap.is_null() ? kUnlimitedCapacity : cap.get<std::int64_t>();
    for (const json& j : doc.at("partitions")) {
      Partition p;
      p.is_dispatcher = j.at("dispatcher").get<bool>();
      if (!p.is_dispatcher) {
        p.range = {j.at("first_point").get<std::size_t>(),
                   j.at("last_point").get<std::size_t>()};
      }
      p.memory_bytes = j.at("memory_bytes").get<std::int64_t>();
      p.boundary_point = j.at("boundary_point").get<std::size_t>();
      p.boundary_id = j.at("boundary").get<std::string>();
      p.transfer_bytes = j.at("transfer_bytes").get<double>();
      p.transfer_class = j.at("class").get<int>();
      scheme.transfer_sizes.push_back(p.transfer_bytes);
      scheme.classes.push_back(p.transfer_class);
      scheme.partitions.push_back(std::move(p));
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed scheme: ") + e.what());
  }
  if (scheme.partitions.size() < 2 || !scheme.partitions.front().is_dispatcher) {
    throw ParseError("scheme needs a dispatcher followed by partitions");
  }
  return scheme;
}

}  // namespace edgeslice
