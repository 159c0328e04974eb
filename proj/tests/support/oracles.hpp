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

// Exhaustive oracles shared by the unit tests and the acceptance binary.

#ifndef EDGESLICE_TESTS_SUPPORT_ORACLES_HPP_
#define EDGESLICE_TESTS_SUPPORT_ORACLES_HPP_

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <vector>

#include "edgeslice/partitioner.hpp"
#include "edgeslice/placement.hpp"

namespace edgeslice::testing {

// Every feasible composition of the candidate points, scored by the summed
// element count of the bridging boundaries. Ties use the same order as the
// library: fewer partitions, then lexicographically smaller boundaries.
struct BruteForce {
  std::int64_t cost = -1;
  std::vector<PointRange> ranges;
};

inline BruteForce exhaustive_partition(const PartitionGraph& pg) {
  BruteForce best;
  std::vector<PointRange> cur;
  const std::size_t n = pg.point_count();
  auto better = [&](std::int64_t cost) {
    if (best.cost < 0 || cost < best.cost) return true;
    if (cost > best.cost) return false;
    if (cur.size() != best.ranges.size()) return cur.size() < best.ranges.size();
    for (std::size_t i = 0; i < cur.size(); ++i) {
      if (cur[i].last != best.ranges[i].last) {
        return cur[i].last < best.ranges[i].last;
      }
    }
    return false;
  };
  std::function<void(std::size_t)> rec = [&](std::size_t first) {
    if (first == n) {
      std::int64_t cost = 0;
      for (std::size_t i = 0; i + 1 < cur.size(); ++i) {
        cost += pg.transfer_elements(cur[i].last);
      }
      if (better(cost)) best = {cost, cur};
      return;
    }
    for (std::size_t last = first; last < n; ++last) {
      if (!pg.fits(first, last)) continue;
      cur.push_back({first, last});
      rec(last + 1);
      cur.pop_back();
    }
  };
  rec(0);
  return best;
}

inline std::int64_t element_cost(const PartitionGraph& pg,
                                 const PartitionScheme& s) {
  std::int64_t cost = 0;
  const auto ranges = s.ranges();
  for (std::size_t i = 0; i + 1 < ranges.size(); ++i) {
    cost += pg.transfer_elements(ranges[i].last);
  }
  return cost;
}

using Path = std::vector<NodeId>;

// Every simple path on k allowed vertices honoring the endpoint constraints.
// `edge_ok` decides adjacency.
inline void enumerate_paths(std::size_t n, std::size_t k, const NodeSet& allowed,
                            std::optional<NodeId> start, std::optional<NodeId> end,
                            const std::function<bool(NodeId, NodeId)>& edge_ok,
                            const std::function<void(const Path&)>& visit) {
  Path cur;
  std::vector<char> used(n, 0);
  std::function<void()> rec = [&] {
    if (cur.size() == k) {
      if (!end || cur.back() == *end) visit(cur);
      return;
    }
    for (NodeId v = 0; v < n; ++v) {
      if (used[v] || !allowed.test(v)) continue;
      if (cur.empty() && start && v != *start) continue;
      if (!cur.empty() && !edge_ok(cur.back(), v)) continue;
      // The end anchor can only close the path.
      if (end && v == *end && cur.size() + 1 != k) continue;
      used[v] = 1;
      cur.push_back(v);
      rec();
      cur.pop_back();
      used[v] = 0;
    }
  };
  rec();
}

inline bool path_exists(const SearchGraph& g, std::size_t k,
                        std::optional<NodeId> start, std::optional<NodeId> end) {
  bool found = false;
  enumerate_paths(
      g.size(), k, g.allowed, start, end,
      [&](NodeId a, NodeId b) { return g.adjacency[a].test(b); },
      [&](const Path&) { found = true; });
  return found;
}

// True when `p` is a simple k-path of `g` with the requested endpoints.
inline bool valid_path(const SearchGraph& g, const Path& p, std::size_t k,
                       std::optional<NodeId> start, std::optional<NodeId> end) {
  if (p.size() != k) return false;
  std::vector<char> seen(g.size(), 0);
  for (NodeId v : p) {
    if (v >= g.size() || seen[v] || !g.allowed.test(v)) return false;
    seen[v] = 1;
  }
  for (std::size_t i = 0; i + 1 < p.size(); ++i) {
    if (!g.adjacency[p[i]].test(p[i + 1])) return false;
  }
  return (!start || p.front() == *start) && (!end || p.back() == *end);
}

inline SearchGraph random_search_graph(std::size_t n, double p,
                                       std::mt19937_64& rng) {
  std::bernoulli_distribution coin(p);
  SearchGraph g{std::vector<NodeSet>(n, NodeSet(n)), NodeSet::full(n)};
  for (NodeId i = 0; i < n; ++i) {
    for (NodeId j = i + 1; j < n; ++j) {
      if (coin(rng)) {
        g.adjacency[i].set(j);
        g.adjacency[j].set(i);
      }
    }
  }
  return g;
}

// Adds the edges of a path through the first k vertices of a random
// permutation and returns that permutation.
inline Path plant_path(SearchGraph& g, std::size_t k, std::mt19937_64& rng) {
  Path perm(g.size());
  for (NodeId v = 0; v < g.size(); ++v) perm[v] = v;
  std::shuffle(perm.begin(), perm.end(), rng);
  for (std::size_t i = 0; i + 1 < k; ++i) {
    g.adjacency[perm[i]].set(perm[i + 1]);
    g.adjacency[perm[i + 1]].set(perm[i]);
  }
  return perm;
}

}  // namespace edgeslice::testing

#endif  // EDGESLICE_TESTS_SUPPORT_ORACLES_HPP_
