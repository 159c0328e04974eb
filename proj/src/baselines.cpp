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

#include "edgeslice/baselines.hpp"

#include <limits>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "edgeslice/errors.hpp"
#include "edgeslice/evaluator.hpp"

namespace edgeslice {

BaselineResult random_baseline(const PartitionGraph& graph, const CommGraph& g,
                               std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const std::size_t n_points = graph.point_count();
  int draws = 0;
  while (draws < kRandomBaselineMaxDraws) {
    std::vector<NodeId> unused(g.size());
    for (NodeId v = 0; v < g.size(); ++v) unused[v] = v;
    auto draw_node = [&]() {
      std::uniform_int_distribution<std::size_t> pick(0, unused.size() - 1);
      const std::size_t i = pick(rng);
      const NodeId v = unused[i];
      unused.erase(unused.begin() + static_cast<std::ptrdiff_t>(i));
      ++draws;
      return v;
    };

    Placement placement;
    placement.nodes.push_back(draw_node());  // dispatcher
    std::vector<PointRange> ranges;
    std::size_t first = 0;
    while (first < n_points && !unused.empty() &&
           draws < kRandomBaselineMaxDraws) {
      const NodeId v = draw_node();
      std::uniform_int_distribution<std::size_t> pick_last(
          first, graph.max_fitting_last(first));
      const std::size_t last = pick_last(rng);
      ranges.push_back({first, last});
      placement.nodes.push_back(v);
      first = last + 1;
    }
    if (first == n_points) {
      return {make_scheme(graph, ranges), std::move(placement)};
    }
  }
  throw InfeasibleError("random baseline found no placement within " +
                        std::to_string(kRandomBaselineMaxDraws) + " draws");
}

BaselineResult joint_optimization_baseline(const PartitionGraph& graph,
                                           const CommGraph& g) {
  // Node capacity is homogeneous, so the greedy partition sequence does not
  // depend on the start node.
  std::vector<PointRange> ranges;
  for (std::size_t first = 0; first < graph.point_count();) {
    const std::size_t max_last = graph.max_fitting_last(first);
    std::size_t best = first;
    for (std::size_t last = first; last <= max_last; ++last) {
      if (graph.transfer_elements(last) <= graph.transfer_elements(best)) {
        best = last;
      }
    }
    ranges.push_back({first, best});
    first = best + 1;
  }
  if (ranges.size() + 1 > g.size()) {
    throw InfeasibleError("joint optimization needs " +
                          std::to_string(ranges.size() + 1) +
                          " nodes but the cluster has " +
                          std::to_string(g.size()));
  }
  PartitionScheme scheme = make_scheme(graph, ranges);

  std::optional<Placement> best;
  double best_beta = std::numeric_limits<double>::infinity();
  for (NodeId start = 0; start < g.size(); ++start) {
    std::vector<char> visited(g.size(), 0);
    Placement p;
    p.nodes.push_back(start);
    visited[start] = 1;
    while (p.nodes.size() < scheme.size()) {
      const NodeId from = p.nodes.back();
      std::optional<NodeId> next;
      for (NodeId v = 0; v < g.size(); ++v) {
        if (visited[v]) continue;
        if (!next || g.bandwidth(from, v) > g.bandwidth(from, *next)) next = v;
      }
      visited[*next] = 1;
      p.nodes.push_back(*next);
    }
    const double beta = evaluate(scheme, p, g).bottleneck;
    if (beta < best_beta) {
      best_beta = beta;
      best = std::move(p);
    }
  }
  return {std::move(scheme), std::move(*best)};
}

}  // namespace edgeslice
