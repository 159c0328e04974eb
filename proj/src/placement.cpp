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

#include "edgeslice/placement.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <tuple>

#include "edgeslice/errors.hpp"

namespace edgeslice {

NodeSet NodeSet::full(std::size_t universe) {
  NodeSet s(universe);
  for (NodeId v = 0; v < universe; ++v) s.set(v);
  return s;
}

bool NodeSet::any() const {
  return std::any_of(words_.begin(), words_.end(),
                     [](std::uint64_t w) { return w != 0; });
}

std::size_t NodeSet::count() const {
  std::size_t n = 0;
  for (std::uint64_t w : words_) n += static_cast<std::size_t>(__builtin_popcountll(w));
  return n;
}

void NodeSet::clear() { std::fill(words_.begin(), words_.end(), 0); }

NodeSet& NodeSet::operator|=(const NodeSet& o) {
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
  return *this;
}

NodeSet& NodeSet::operator&=(const NodeSet& o) {
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= o.words_[i];
  return *this;
}

NodeSet NodeSet::operator&(const NodeSet& o) const {
  NodeSet r = *this;
  r &= o;
  return r;
}

NodeSet NodeSet::operator~() const {
  NodeSet r(universe_);
  for (std::size_t i = 0; i < words_.size(); ++i) r.words_[i] = ~words_[i];
  if (universe_ % 64 != 0 && !r.words_.empty()) {
    r.words_.back() &= (std::uint64_t{1} << (universe_ % 64)) - 1;
  }
  return r;
}

SearchGraph threshold_subgraph(const CommGraph& g, double threshold,
                               const NodeSet& available) {
  const std::size_t n = g.size();
  SearchGraph sg{std::vector<NodeSet>(n, NodeSet(n)), available};
  for (NodeId i = 0; i < n; ++i) {
    if (!available.test(i)) continue;
    for (NodeId j = i + 1; j < n; ++j) {
      if (available.test(j) && g.bandwidth(i, j) >= threshold) {
        sg.adjacency[i].set(j);
        sg.adjacency[j].set(i);
      }
    }
  }
  return sg;
}

std::size_t color_coding_trials(std::size_t k, double failure_probability) {
  if (!(failure_probability > 0.0 && failure_probability < 1.0)) {
    throw std::invalid_argument("failure probability must be in (0, 1)");
  }
  return static_cast<std::size_t>(std::ceil(
      std::exp(static_cast<double>(k)) * std::log(1.0 / failure_probability)));
}

namespace {

// Vertices reachable from `root` inside the allowed set, never expanding past
// `stop` (a path may only end there).
NodeSet reachable(const SearchGraph& g, NodeId root, std::optional<NodeId> stop) {
  NodeSet seen(g.size());
  std::vector<NodeId> stack{root};
  seen.set(root);
  while (!stack.empty()) {
    const NodeId v = stack.back();
    stack.pop_back();
    if (stop && v == *stop && v != root) continue;
    (g.adjacency[v] & g.allowed).for_each([&](NodeId w) {
      if (!seen.test(w)) {
        seen.set(w);
        stack.push_back(w);
      }
    });
  }
  return seen;
}

// Cheap exact refutations; true means a conforming path may exist.
bool path_possible(const SearchGraph& g, std::size_t k,
                   std::optional<NodeId> start, std::optional<NodeId> end) {
  if (g.allowed.count() < k) return false;
  if (start) {
    const NodeSet r = reachable(g, *start, end);
    if (r.count() < k) return false;
    return !end || r.test(*end);
  }
  if (end) return reachable(g, *end, std::nullopt).count() >= k;
  NodeSet left = g.allowed;
  bool found = false;
  left.for_each([&](NodeId v) {
    if (found || !left.test(v)) return;
    const NodeSet comp = reachable(g, v, std::nullopt);
    if (comp.count() >= k) found = true;
    comp.for_each([&](NodeId w) { left.reset(w); });
  });
  return found;
}

}  // namespace

std::optional<std::vector<NodeId>> color_coding_k_path(
    const SearchGraph& g, std::size_t k, std::optional<NodeId> start,
    std::optional<NodeId> end, std::size_t trials, std::mt19937_64& rng) {
  if (k == 0) throw std::invalid_argument("k must be >= 1");
  if (k > 24) throw std::invalid_argument("k too large for color coding");
  if (start && !g.allowed.test(*start)) return std::nullopt;
  if (end && !g.allowed.test(*end)) return std::nullopt;
  if (k == 1) {
    if (start && end && *start != *end) return std::nullopt;
    if (start) return std::vector<NodeId>{*start};
    if (end) return std::vector<NodeId>{*end};
    std::optional<NodeId> any;
    g.allowed.for_each([&](NodeId v) {
      if (!any) any = v;
    });
    if (!any) return std::nullopt;
    return std::vector<NodeId>{*any};
  }
  if (start && end && *start == *end) return std::nullopt;
  if (!path_possible(g, k, start, end)) return std::nullopt;

  const std::size_t n = g.size();
  const std::size_t masks = std::size_t{1} << k;
  const std::size_t full = masks - 1;
  std::vector<int> color(n, 0);
  std::vector<NodeSet> by_color(k, NodeSet(n));
  std::vector<NodeSet> dp(masks, NodeSet(n));
  std::uniform_int_distribution<int> pick(0, static_cast<int>(k) - 1);
  NodeSet end_set(n);
  if (end) end_set.set(*end);
  const NodeSet not_end = ~end_set;

  for (std::size_t trial = 0; trial < trials; ++trial) {
    for (NodeSet& s : by_color) s.clear();
    for (NodeSet& s : dp) s.clear();
    g.allowed.for_each([&](NodeId v) {
      color[v] = pick(rng);
      by_color[static_cast<std::size_t>(color[v])].set(v);
    });

    if (start) {
      dp[std::size_t{1} << color[*start]].set(*start);
    } else {
      (g.allowed & not_end).for_each([&](NodeId v) {
        dp[std::size_t{1} << color[v]].set(v);
      });
    }
    for (std::size_t mask = 1; mask < full; ++mask) {
      // Reaching `end` early terminates that partial path.
      const NodeSet frontier = dp[mask] & not_end;
      if (!frontier.any()) continue;
      NodeSet next(n);
      frontier.for_each([&](NodeId v) { next |= g.adjacency[v]; });
      next &= g.allowed;
      for (std::size_t c = 0; c < k; ++c) {
        const std::size_t bit = std::size_t{1} << c;
        if (mask & bit) continue;
        dp[mask | bit] |= next & by_color[c];
      }
    }

    std::optional<NodeId> last;
    if (end) {
      if (dp[full].test(*end)) last = *end;
    } else {
      dp[full].for_each([&](NodeId v) {
        if (!last) last = v;
      });
    }
    if (!last) continue;

    std::vector<NodeId> path{*last};
    std::size_t mask = full;
    NodeId v = *last;
    while (mask != (std::size_t{1} << color[v]) || (start && v != *start)) {
      const std::size_t prev = mask ^ (std::size_t{1} << color[v]);
      std::optional<NodeId> pred;
      (dp[prev] & g.adjacency[v] & not_end).for_each([&](NodeId p) {
        if (!pred) pred = p;
      });
      if (!pred) throw std::logic_error("color-coding backtrack failed");
      v = *pred;
      mask = prev;
      path.push_back(v);
    }
    std::reverse(path.begin(), path.end());
    return path;
  }
  return std::nullopt;
}

std::vector<Run> find_subarrays(std::span<const int> classes, int x) {
  std::vector<Run> runs;
  for (std::size_t i = 0; i < classes.size();) {
    if (classes[i] != x) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < classes.size() && classes[j] == x) ++j;
    runs.push_back({i, j - i});
    i = j;
  }
  std::stable_sort(runs.begin(), runs.end(), [](const Run& a, const Run& b) {
    return a.length > b.length;
  });
  return runs;
}

KPathMatcher::KPathMatcher(const CommGraph& g, std::uint64_t seed,
                           double failure_probability)
    : g_(g), rng_(seed), failure_probability_(failure_probability),
      consumed_(g.size()) {}

KPathResult KPathMatcher::subgraph_k_path(int transfer_class, std::size_t k,
                                          std::optional<NodeId> start,
                                          std::optional<NodeId> end) {
  const std::size_t n = g_.size();
  NodeSet available = ~consumed_;
  if (start) available.set(*start);
  if (end) available.set(*end);

  auto no_path = [&]() {
    return NoPathError("no " + std::to_string(k) + "-path for class " +
                       std::to_string(transfer_class) + " at any threshold");
  };
  if (k == 0) throw std::invalid_argument("k must be >= 1");
  if (available.count() < k) throw no_path();

  KPathResult best;
  if (k == 1) {
    SearchGraph sg{std::vector<NodeSet>(n, NodeSet(n)), available};
    auto p = color_coding_k_path(sg, 1, start, end, 1, rng_);
    if (!p) throw no_path();
    best.path = *p;
    best.threshold = std::nan("");
  } else {
    struct Edge {
      double w;
      NodeId a;
      NodeId b;
    };
    std::vector<Edge> edges;
    for (NodeId i = 0; i < n; ++i) {
      if (!available.test(i)) continue;
      for (NodeId j = i + 1; j < n; ++j) {
        if (available.test(j)) edges.push_back({g_.bandwidth(i, j), i, j});
      }
    }
    std::sort(edges.begin(), edges.end(), [](const Edge& x, const Edge& y) {
      return std::tie(y.w, x.a, x.b) < std::tie(x.w, y.a, y.b);
    });
    const std::size_t trials = color_coding_trials(k, failure_probability_);
    std::size_t low = 0;
    std::size_t high = edges.size();
    bool found = false;
    while (low < high) {
      const std::size_t median = (low + high) / 2;
      const double threshold = edges[median].w;
      const SearchGraph sg = threshold_subgraph(g_, threshold, available);
      auto result = color_coding_k_path(sg, k, start, end, trials, rng_);
      if (!result) {
        low = median + 1;
      } else {
        high = median;
        best.path = std::move(*result);
        best.threshold = threshold;
        found = true;
      }
    }
    if (!found) throw no_path();
  }
  for (NodeId v : best.path) consumed_.set(v);
  return best;
}

int EdgeClassification::class_of(double bandwidth) const {
  for (int x = static_cast<int>(thresholds.size()) - 1; x > 0; --x) {
    const auto& t = thresholds[static_cast<std::size_t>(x)];
    if (t && bandwidth >= *t) return x;
  }
  return 0;
}

Placement k_path_matching(const PartitionScheme& scheme, const CommGraph& g,
                          std::uint64_t seed) {
  if (scheme.size() < 2) throw std::invalid_argument("scheme has no hops");
  if (g.size() < scheme.size()) {
    throw InfeasibleError("cluster has " + std::to_string(g.size()) +
                          " nodes but the scheme needs " +
                          std::to_string(scheme.size()));
  }
  const std::span<const int> hop_classes = scheme.hop_classes();
  std::vector<std::optional<NodeId>> slots(scheme.size());
  std::vector<double> hop_thresholds(scheme.hop_count(), 0.0);
  EdgeClassification edges;
  edges.n_classes = scheme.n_classes;
  edges.thresholds.assign(static_cast<std::size_t>(scheme.n_classes),
                          std::nullopt);

  KPathMatcher matcher(g, seed);
  for (int x = scheme.n_classes - 1; x >= 0; --x) {
    for (const Run& run : find_subarrays(hop_classes, x)) {
      const std::optional<NodeId> start = slots[run.start];
      const std::optional<NodeId> end = slots[run.start + run.length];
      KPathResult found;
      try {
        found = matcher.subgraph_k_path(x, run.length + 1, start, end);
      } catch (const NoPathError& e) {
        throw MatchingError(x, run.start, run.length,
                            "cannot place run of class " + std::to_string(x) +
                                " starting at hop " + std::to_string(run.start) +
                                " (length " + std::to_string(run.length) +
                                "): " + e.what());
      }
      for (std::size_t i = 0; i < found.path.size(); ++i) {
        slots[run.start + i] = found.path[i];
      }
      for (std::size_t h = run.start; h < run.start + run.length; ++h) {
        hop_thresholds[h] = found.threshold;
      }
      auto& t = edges.thresholds[static_cast<std::size_t>(x)];
      if (!t || found.threshold < *t) t = found.threshold;
    }
  }

  Placement placement;
  for (const auto& s : slots) {
    if (!s) throw std::logic_error("matching left a slot unassigned");
    placement.nodes.push_back(*s);
  }
  placement.hop_classes.assign(hop_classes.begin(), hop_classes.end());
  placement.hop_thresholds = std::move(hop_thresholds);
  placement.edge_classes = std::move(edges);
  return placement;
}

}  // namespace edgeslice
