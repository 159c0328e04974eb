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

#ifndef EDGESLICE_EVALUATOR_HPP_
#define EDGESLICE_EVALUATOR_HPP_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "edgeslice/comm_graph.hpp"
#include "edgeslice/model_graph.hpp"
#include "edgeslice/partitioner.hpp"
#include "edgeslice/placement.hpp"

namespace edgeslice {

// Bytes to megabits.
inline constexpr double kMegabitsPerByte = 8e-6;

struct LatencyReport {
  // Seconds per hop; hop k runs from slot k to slot k+1 and carries the
  // transfer size of partition k. The return hop to the dispatcher is not
  // modeled.
  std::vector<double> per_hop_latency;
  std::size_t bottleneck_hop = 0;
  double bottleneck = 0.0;  // seconds
  double throughput = 0.0;  // Hz
  double theorem1_bound = 0.0;
  double approx_ratio = 0.0;
};

// Lowest achievable bottleneck: largest hop transfer over the fastest link of
// the cluster, in seconds.
double theorem1_bound(std::span<const double> hop_sizes_bytes,
                      std::span<const double> bandwidths_mbps);

// `compute_times` is either empty or parallel to the placement slots; entry k
// is added to the hop leaving slot k.
LatencyReport evaluate(const PartitionScheme& scheme, const Placement& placement,
                       const CommGraph& g,
                       std::span<const double> compute_times = {});

// Same as `evaluate` on raw hop sizes and a node sequence of length
// hop_sizes.size() + 1.
LatencyReport evaluate_hops(std::span<const double> hop_sizes_bytes,
                            std::span<const NodeId> nodes, const CommGraph& g,
                            std::span<const double> compute_times = {});

struct OracleResult {
  PartitionScheme scheme;
  Placement placement;
  LatencyReport report;
};

inline constexpr std::size_t kOracleMaxPoints = 14;
inline constexpr std::size_t kOracleMaxNodes = 8;

// Exhaustive minimum-bottleneck partitioning and placement. Throws
// InstanceTooLargeError beyond the guard. Among equal bottlenecks the first
// partitioning (lexicographic boundaries) and then the lexicographically
// smallest node sequence wins.
OracleResult brute_force_optimum(const PartitionGraph& graph, const CommGraph& g);

std::string dump_placement_report(const PartitionScheme& scheme,
                                  const Placement& placement,
                                  const CommGraph& g,
                                  const LatencyReport& report);

}  // namespace edgeslice

#endif  // EDGESLICE_EVALUATOR_HPP_
