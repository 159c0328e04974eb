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

#ifndef EDGESLICE_PARTITIONER_HPP_
#define EDGESLICE_PARTITIONER_HPP_

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "edgeslice/model_graph.hpp"

namespace edgeslice {

inline constexpr std::string_view kPartsFormat = "edgeslice-parts/1";

// ZFP ratio times LZ4 ratio.
inline constexpr double kDefaultCompressionRatio = 1.44 * 2.1;
inline constexpr int kFloat32Bytes = 4;
inline constexpr std::int64_t kUnlimitedCapacity =
    std::numeric_limits<std::int64_t>::max();
inline constexpr std::int64_t kBytesPerMegabyte = 1 << 20;

struct PartitionOptions {
  double compression_ratio = kDefaultCompressionRatio;
  int bytes_per_element = kFloat32Bytes;
};

// Compressed bytes sent downstream when the model is cut after `layer`.
double transfer_size(const Layer& layer, double compression_ratio,
                     int bytes_per_element = kFloat32Bytes);

// Maps a transfer size onto a class label in [0, n_classes()), 0 lowest.
// A value is in class c when exactly c breakpoints are <= it.
class TransferClassifier {
 public:
  TransferClassifier() = default;
  explicit TransferClassifier(std::vector<double> breakpoints);

  int classify(double size) const;
  int n_classes() const { return static_cast<int>(breakpoints_.size()) + 1; }
  const std::vector<double>& breakpoints() const { return breakpoints_; }

 private:
  std::vector<double> breakpoints_;
};

// Equal-frequency bins. Duplicate breakpoints collapse, so the effective
// class count can fall below `n_classes`.
TransferClassifier fit_classifier(std::span<const double> sizes, int n_classes);

// Inclusive range of candidate-point indices.
struct PointRange {
  std::size_t first = 0;
  std::size_t last = 0;

  std::size_t length() const { return last - first + 1; }
  friend bool operator==(const PointRange&, const PointRange&) = default;
};

// Vertices are the memory-feasible contiguous candidate ranges; an edge joins
// ranges that abut in the candidate list.
class PartitionGraph {
 public:
  struct Vertex {
    PointRange range;
    std::int64_t memory_bytes = 0;
  };

  std::size_t point_count() const { return point_ids_.size(); }
  const std::vector<Vertex>& vertices() const { return vertices_; }
  const std::vector<std::size_t>& children(std::size_t v) const {
    return children_[v];
  }
  std::size_t edge_count() const;
  std::vector<std::size_t> roots() const;
  std::vector<std::size_t> leaves() const;

  std::int64_t range_memory(std::size_t first, std::size_t last) const;
  bool fits(std::size_t first, std::size_t last) const {
    return range_memory(first, last) < capacity_bytes_;
  }
  // Largest `last` such that [first..last] fits; assumes [first..first] fits.
  std::size_t max_fitting_last(std::size_t first) const;

  std::int64_t transfer_elements(std::size_t point) const {
    return point_elements_[point];
  }
  double transfer_bytes(std::size_t point) const;
  // Transfer sizes of every candidate point, in candidate order.
  std::vector<double> candidate_transfer_sizes() const;
  const std::string& point_id(std::size_t point) const {
    return point_ids_[point];
  }
  std::int64_t capacity_bytes() const { return capacity_bytes_; }
  const PartitionOptions& options() const { return options_; }

 private:
  friend PartitionGraph build_partition_graph(const CandidatePoints&,
                                              const ModelGraph&, std::int64_t,
                                              const PartitionOptions&);

  std::vector<std::string> point_ids_;
  std::vector<std::int64_t> point_elements_;
  // memory_prefix_[k] = footprint of all layers up to and including point k's
  // depth band (the last band absorbs everything deeper).
  std::vector<std::int64_t> memory_prefix_;
  std::vector<Vertex> vertices_;
  std::vector<std::vector<std::size_t>> children_;
  std::int64_t capacity_bytes_ = kUnlimitedCapacity;
  PartitionOptions options_;
};

// Throws InfeasibleError if some single candidate band alone reaches the
// capacity, naming that point.
PartitionGraph build_partition_graph(const CandidatePoints& points,
                                     const ModelGraph& g,
                                     std::int64_t capacity_bytes,
                                     const PartitionOptions& options = {});

struct Partition {
  bool is_dispatcher = false;
  PointRange range;  // unused for the dispatcher
  std::int64_t memory_bytes = 0;
  std::size_t boundary_point = 0;
  std::string boundary_id;
  double transfer_bytes = 0.0;
  int transfer_class = 0;
};

// Dispatcher first, then the model partitions in depth order. Entry k of
// `transfer_sizes` is sent from partition k to partition k+1; the last entry
// (the model output) travels back to the dispatcher and is not a hop.
struct PartitionScheme {
  std::vector<Partition> partitions;
  std::vector<double> transfer_sizes;
  std::vector<int> classes;
  int n_classes = 1;
  std::vector<double> breakpoints;
  // Sum of the transfer sizes bridging consecutive model partitions.
  double total_cost_bytes = 0.0;
  std::int64_t capacity_bytes = kUnlimitedCapacity;

  std::size_t size() const { return partitions.size(); }
  std::size_t hop_count() const { return partitions.size() - 1; }
  std::span<const double> hop_sizes() const {
    return std::span<const double>(transfer_sizes).first(hop_count());
  }
  std::span<const int> hop_classes() const {
    return std::span<const int>(classes).first(hop_count());
  }
  std::vector<PointRange> ranges() const;
};

// Builds a scheme (dispatcher prepended) from contiguous ranges covering every
// candidate point. Throws InfeasibleError if a range does not fit.
PartitionScheme make_scheme(const PartitionGraph& graph,
                            std::span<const PointRange> ranges,
                            const TransferClassifier& classifier = {});

// Re-labels the classes of an existing scheme.
void relabel(PartitionScheme& scheme, const TransferClassifier& classifier);

struct OptimizeOptions {
  bool memoize = true;
};

// Root-to-leaf path minimizing the summed transfer size. Ties prefer fewer
// partitions, then the lexicographically smallest boundary sequence.
PartitionScheme optimal_partition(const PartitionGraph& graph,
                                  const TransferClassifier& classifier,
                                  const OptimizeOptions& options = {});

std::string dump_scheme(const PartitionScheme& scheme);
PartitionScheme parse_scheme(std::string_view text);

}  // namespace edgeslice

#endif  // EDGESLICE_PARTITIONER_HPP_
