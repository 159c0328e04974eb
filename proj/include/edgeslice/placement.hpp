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

#ifndef EDGESLICE_PLACEMENT_HPP_
#define EDGESLICE_PLACEMENT_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "edgeslice/comm_graph.hpp"
#include "edgeslice/partitioner.hpp"

namespace edgeslice {

// Fixed-universe set of node ids backed by 64-bit words.
class NodeSet {
 public:
  NodeSet() = default;
  explicit NodeSet(std::size_t universe)
      : universe_(universe), words_((universe + 63) / 64, 0) {}

  static NodeSet full(std::size_t universe);

  std::size_t universe() const { return universe_; }
  bool test(NodeId v) const { return (words_[v / 64] >> (v % 64)) & 1U; }
  void set(NodeId v) { words_[v / 64] |= std::uint64_t{1} << (v % 64); }
  void reset(NodeId v) { words_[v / 64] &= ~(std::uint64_t{1} << (v % 64)); }
  bool any() const;
  std::size_t count() const;
  void clear();

  NodeSet& operator|=(const NodeSet& o);
  NodeSet& operator&=(const NodeSet& o);
  NodeSet operator&(const NodeSet& o) const;
  NodeSet operator~() const;

  template <typename F>
  void for_each(F&& f) const {
    for (std::size_t w = 0; w < words_.size(); ++w) {
      std::uint64_t bits = words_[w];
      while (bits != 0) {
        const int b = __builtin_ctzll(bits);
        f(static_cast<NodeId>(w * 64 + static_cast<std::size_t>(b)));
        bits &= bits - 1;
      }
    }
  }

  friend bool operator==(const NodeSet&, const NodeSet&) = default;

 private:
  std::size_t universe_ = 0;
  std::vector<std::uint64_t> words_;
};

// Unweighted graph restricted to `allowed` vertices.
struct SearchGraph {
  std::vector<NodeSet> adjacency;
  NodeSet allowed;

  std::size_t size() const { return adjacency.size(); }
};

// Edges with bandwidth >= threshold among `available` nodes.
SearchGraph threshold_subgraph(const CommGraph& g, double threshold,
                               const NodeSet& available);

// Colorings needed so that a k-path is missed with probability at most
// `failure_probability`: ceil(e^k * ln(1/failure_probability)).
std::size_t color_coding_trials(std::size_t k,
                                double failure_probability = 0.01);

// Randomized color-coding search for a simple path on k vertices. When
// `start` is given the path begins there; when `end` is given the path ends
// there and `end` is never an interior vertex. Returns nullopt if no colorful
// path appears within `trials` colorings (or the path provably cannot exist).
std::optional<std::vector<NodeId>> color_coding_k_path(
    const SearchGraph& g, std::size_t k, std::optional<NodeId> start,
    std::optional<NodeId> end, std::size_t trials, std::mt19937_64& rng);

// Maximal run of one class label in a class sequence.
struct Run {
  std::size_t start = 0;
  std::size_t length = 0;
  friend bool operator==(const Run&, const Run&) = default;
};

// Maximal runs of label `x`, longest first (ties by start index).
std::vector<Run> find_subarrays(std::span<const int> classes, int x);

struct KPathResult {
  std::vector<NodeId> path;
  // Bandwidth threshold at which the path was found.
  double threshold = 0.0;
};

// Owns the consumed-node set of one matching.
class KPathMatcher {
 public:
  KPathMatcher(const CommGraph& g, std::uint64_t seed,
               double failure_probability = 0.01);

  // Path on k vertices at the highest edge-weight threshold (drawn from the
  // descending edge list) admitting one. Interior and free endpoint nodes
  // must be unconsumed; anchors may already be consumed. The path's nodes are
  // consumed afterwards. Throws NoPathError if no threshold works.
  KPathResult subgraph_k_path(int transfer_class, std::size_t k,
                              std::optional<NodeId> start,
                              std::optional<NodeId> end);

  const NodeSet& consumed() const { return consumed_; }

 private:
  const CommGraph& g_;
  std::mt19937_64 rng_;
  double failure_probability_;
  NodeSet consumed_;
};

// Per-class bandwidth cutoffs induced by the matching. An edge belongs to the
// highest class whose cutoff it reaches, otherwise to class 0.
struct EdgeClassification {
  int n_classes = 1;
  std::vector<std::optional<double>> thresholds;

  int class_of(double bandwidth) const;
};

struct Placement {
  // Slot 0 hosts the dispatcher; slot k hosts partition k.
  std::vector<NodeId> nodes;
  // Parallel to hops; empty for algorithms that do not classify.
  std::vector<int> hop_classes;
  std::vector<double> hop_thresholds;
  EdgeClassification edge_classes;

  std::size_t size() const { return nodes.size(); }
};

// Greedy class-ordered matching of the scheme's hop classes onto node paths.
// Throws InfeasibleError if the graph has fewer nodes than the scheme has
// partitions and MatchingError if some run cannot be placed.
Placement k_path_matching(const PartitionScheme& scheme, const CommGraph& g,
                          std::uint64_t seed);

}  // namespace edgeslice

#endif  // EDGESLICE_PLACEMENT_HPP_
