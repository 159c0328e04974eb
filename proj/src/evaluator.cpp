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

#include "edgeslice/evaluator.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

#include "edgeslice/errors.hpp"
#include "json.hpp"

namespace edgeslice {

using json = nlohmann::json;

double theorem1_bound(std::span<const double> hop_sizes_bytes,
                      std::span<const double> bandwidths_mbps) {
  if (hop_sizes_bytes.empty() || bandwidths_mbps.empty()) {
    throw std::invalid_argument("theorem1_bound needs sizes and bandwidths");
  }
  const double max_size =
      *std::max_element(hop_sizes_bytes.begin(), hop_sizes_bytes.end());
  const double max_bw =
      *std::max_element(bandwidths_mbps.begin(), bandwidths_mbps.end());
  if (!(max_bw > 0.0)) throw DomainError("bandwidths must be positive");
  return max_size * kMegabitsPerByte / max_bw;
}

LatencyReport evaluate_hops(std::span<const double> hop_sizes_bytes,
                            std::span<const NodeId> nodes, const CommGraph& g,
                            std::span<const double> compute_times) {
  if (hop_sizes_bytes.empty()) throw LengthMismatchError("no hops to evaluate");
  if (nodes.size() != hop_sizes_bytes.size() + 1) {
    throw LengthMismatchError("placement has " + std::to_string(nodes.size()) +
                              " slots for " +
                              std::to_string(hop_sizes_bytes.size()) + " hops");
  }
  if (!compute_times.empty() && compute_times.size() != nodes.size()) {
    throw LengthMismatchError("compute times must be parallel to the slots");
  }
  LatencyReport r;
  for (std::size_t k = 0; k < hop_sizes_bytes.size(); ++k) {
    if (nodes[k] >= g.size() || nodes[k + 1] >= g.size()) {
      throw std::out_of_range("placement references an unknown node");
    }
    double gamma =
        hop_sizes_bytes[k] * kMegabitsPerByte / g.bandwidth(nodes[k], nodes[k + 1]);
    if (!compute_times.empty()) gamma += compute_times[k];
    r.per_hop_latency.push_back(gamma);
  }
  const auto it =
      std::max_element(r.per_hop_latency.begin(), r.per_hop_latency.end());
  r.bottleneck_hop = static_cast<std::size_t>(it - r.per_hop_latency.begin());
  r.bottleneck = *it;
  r.throughput = 1.0 / r.bottleneck;
  const double bw = g.max_bandwidth();
  r.theorem1_bound = theorem1_bound(hop_sizes_bytes, std::span<const double>(&bw, 1));
  r.approx_ratio = r.bottleneck / r.theorem1_bound;
  return r;
}

LatencyReport evaluate(const PartitionScheme& scheme, const Placement& placement,
                       const CommGraph& g,
                       std::span<const double> compute_times) {
  if (placement.size() != scheme.size()) {
    throw LengthMismatchError("placement has " +
                              std::to_string(placement.size()) +
                              " slots but the scheme has " +
                              std::to_string(scheme.size()) + " partitions");
  }
  return evaluate_hops(scheme.hop_sizes(), placement.nodes, g, compute_times);
}

namespace {

class Oracle {
 public:
  Oracle(const PartitionGraph& pg, const CommGraph& g) : pg_(pg), g_(g) {}

  void run() {
    std::vector<PointRange> ranges;
    enumerate_partitionings(0, ranges);
  }

  bool found() const { return have_; }
  double best() const { return best_beta_; }
  const std::vector<PointRange>& best_ranges() const { return best_ranges_; }
  const std::vector<NodeId>& best_nodes() const { return best_nodes_; }

 private:
  void enumerate_partitionings(std::size_t first,
                               std::vector<PointRange>& ranges) {
    if (first == pg_.point_count()) {
      place(ranges);
      return;
    }
    // The dispatcher needs a slot too.
    if (ranges.size() + 2 > g_.size()) return;
    for (std::size_t last = first; last < pg_.point_count(); ++last) {
      if (!pg_.fits(first, last)) break;
      ranges.push_back({first, last});
      enumerate_partitionings(last + 1, ranges);
      ranges.pop_back();
    }
  }

  void place(const std::vector<PointRange>& ranges) {
    hop_bits_.clear();
    hop_bits_.push_back(pg_.transfer_bytes(0) * kMegabitsPerByte);
    for (std::size_t i = 0; i + 1 < ranges.size(); ++i) {
      hop_bits_.push_back(pg_.transfer_bytes(ranges[i].last) * kMegabitsPerByte);
    }
    // Nothing can beat the fastest link carrying the largest hop.
    const double floor =
        *std::max_element(hop_bits_.begin(), hop_bits_.end()) / g_.max_bandwidth();
    if (have_ && floor >= best_beta_) return;

    nodes_.assign(1, 0);
    used_.assign(g_.size(), 0);
    improved_ = false;
    for (NodeId first = 0; first < g_.size(); ++first) {
      nodes_[0] = first;
      used_[first] = 1;
      extend(0.0);
      used_[first] = 0;
    }
    if (improved_) best_ranges_ = ranges;
  }

  void extend(double beta) {
    const std::size_t hop = nodes_.size() - 1;
    if (hop == hop_bits_.size()) {
      if (!have_ || beta < best_beta_) {
        have_ = true;
        improved_ = true;
        best_beta_ = beta;
        best_nodes_ = nodes_;
      }
      return;
    }
    const NodeId from = nodes_.back();
    for (NodeId next = 0; next < g_.size(); ++next) {
      if (used_[next]) continue;
      const double gamma = hop_bits_[hop] / g_.bandwidth(from, next);
      const double b = std::max(beta, gamma);
      if (have_ && b >= best_beta_) continue;
      used_[next] = 1;
      nodes_.push_back(next);
      extend(b);
      nodes_.pop_back();
      used_[next] = 0;
    }
  }

  const PartitionGraph& pg_;
  const CommGraph& g_;
  std::vector<double> hop_bits_;
  std::vector<NodeId> nodes_;
  std::vector<char> used_;
  bool have_ = false;
  bool improved_ = false;
  double best_beta_ = std::numeric_limits<double>::infinity();
  std::vector<PointRange> best_ranges_;
  std::vector<NodeId> best_nodes_;
};

}  // namespace

OracleResult brute_force_optimum(const PartitionGraph& graph,
                                 const CommGraph& g) {
  if (graph.point_count() > kOracleMaxPoints || g.size() > kOracleMaxNodes) {
    throw InstanceTooLargeError(
        "exhaustive search limited to " + std::to_string(kOracleMaxPoints) +
        " candidate points and " + std::to_string(kOracleMaxNodes) +
        " nodes (got " + std::to_string(graph.point_count()) + " and " +
        std::to_string(g.size()) + ")");
  }
  Oracle oracle(graph, g);
  oracle.run();
  if (!oracle.found()) {
    throw InfeasibleError("no partitioning fits on " + std::to_string(g.size()) +
                          " nodes");
  }
  OracleResult out;
  out.scheme = make_scheme(graph, oracle.best_ranges());
  out.placement.nodes = oracle.best_nodes();
  out.report = evaluate(out.scheme, out.placement, g);
  return out;
}

std::string dump_placement_report(const PartitionScheme& scheme,
                                  const Placement& placement,
                                  const CommGraph& g,
                                  const LatencyReport& report) {
  json doc;
  doc["format"] = "edgeslice-placement/1";
  doc["nodes"] = placement.nodes;
  json hops = json::array();
  for (std::size_t k = 0; k < scheme.hop_count(); ++k) {
    json h;
    h["from"] = placement.nodes[k];
    h["to"] = placement.nodes[k + 1];
    h["transfer_bytes"] = scheme.transfer_sizes[k];
    h["bandwidth_mbps"] = g.bandwidth(placement.nodes[k], placement.nodes[k + 1]);
    if (k < placement.hop_classes.size()) {
      h["class"] = placement.hop_classes[k];
    } else {
      h["class"] = nullptr;
    }
    h["latency_s"] = report.per_hop_latency[k];
    hops.push_back(std::move(h));
  }
  doc["hops"] = std::move(hops);
  doc["beta_s"] = report.bottleneck;
  doc["throughput_hz"] = report.throughput;
  doc["bound_s"] = report.theorem1_bound;
  doc["ratio"] = report.approx_ratio;
  doc["bottleneck_hop"] = report.bottleneck_hop;
  return doc.dump(2);
}

}  // namespace edgeslice
