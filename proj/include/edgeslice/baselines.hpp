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

#ifndef EDGESLICE_BASELINES_HPP_
#define EDGESLICE_BASELINES_HPP_

#include <cstdint>

#include "edgeslice/comm_graph.hpp"
#include "edgeslice/partitioner.hpp"
#include "edgeslice/placement.hpp"

namespace edgeslice {

struct BaselineResult {
  PartitionScheme scheme;
  Placement placement;
};

inline constexpr int kRandomBaselineMaxDraws = 10000;

// Draws a random unused node and a random feasible next partition until the
// model is covered. A draw sequence that runs out of nodes is abandoned and
// restarted; after kRandomBaselineMaxDraws draws the instance is declared
// infeasible.
BaselineResult random_baseline(const PartitionGraph& graph, const CommGraph& g,
                               std::uint64_t seed);

// For every start node: grow partitions by the smallest feasible boundary
// transfer size while walking to the highest-bandwidth unvisited neighbor.
// Keeps the start with the smallest bottleneck. Deterministic.
BaselineResult joint_optimization_baseline(const PartitionGraph& graph,
                                           const CommGraph& g);

}  // namespace edgeslice

#endif  // EDGESLICE_BASELINES_HPP_
