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

#ifndef EDGESLICE_EXPERIMENT_HPP_
#define EDGESLICE_EXPERIMENT_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "edgeslice/comm_graph.hpp"
#include "edgeslice/partitioner.hpp"
#include "edgeslice/placement.hpp"

namespace edgeslice {

inline constexpr std::string_view kConfigFormat = "edgeslice-config/1";
inline constexpr std::string_view kSweepFormat = "edgeslice-sweep/1";
inline constexpr std::string_view kAggregateFormat = "edgeslice-aggregate/1";
inline constexpr std::string_view kRatioFormat = "edgeslice-ratios/1";
inline constexpr std::string_view kShapesFormat = "edgeslice-shapes/1";

// SplitMix64 finalizer folded over the inputs. Used to give every sweep cell
// an independent, order-free seed.
std::uint64_t derive_seed(std::uint64_t base,
                          std::initializer_list<std::uint64_t> parts);

enum class Algorithm { kKPath, kJoint, kRandom };

Algorithm parse_algorithm(std::string_view name);
std::string_view algorithm_name(Algorithm algorithm);

// ---------------------------------------------------------------------------
// k-path pipeline with retries.

inline constexpr int kMaxMatchingRetries = 3;

struct KPathOutcome {
  PartitionScheme scheme;
  Placement placement;
  int classes_used = 0;
  int retries = 0;
};

// Labels `scheme` with an equal-frequency classifier fitted on every
// candidate transfer size of `graph`, then matches it onto `g`. On a matching
// failure the class count is halved (never below 1) and the matching rerun
// with a fresh seed, up to kMaxMatchingRetries times; the last MatchingError
// propagates.
KPathOutcome run_kpath_pipeline(const PartitionGraph& graph,
                                const PartitionScheme& scheme,
                                const CommGraph& g, int n_classes,
                                std::uint64_t seed);

// Convenience overload that runs the optimal partitioner first.
KPathOutcome run_kpath_pipeline(const PartitionGraph& graph, const CommGraph& g,
                                int n_classes, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Sweep.

struct ExperimentConfig {
  std::vector<std::filesystem::path> models;
  std::vector<std::size_t> node_counts = {5, 10, 15, 20, 50};
  std::vector<int> class_counts = {2, 5, 8, 11, 14, 17, 20};
  std::vector<int> capacities_mb = {64, 128, 256, 512};
  int trials = 50;
  std::uint64_t seed = 1;
  double compression_ratio = kDefaultCompressionRatio;
  std::vector<Algorithm> algorithms = {Algorithm::kKPath, Algorithm::kJoint,
                                       Algorithm::kRandom};
  // Worker threads; 0 picks the hardware concurrency.
  std::size_t threads = 0;

  // Throws ValidationError on empty lists, non-positive entries,
  // trials < 1 or a non-positive compression ratio.
  void validate() const;
};

// Relative model paths resolve against `base_dir`.
ExperimentConfig parse_config(std::string_view text,
                              const std::filesystem::path& base_dir = {});
ExperimentConfig load_config(const std::filesystem::path& path);
std::string dump_config(const ExperimentConfig& config);

enum class CellStatus { kOk, kInfeasible, kMatchingFailed };
std::string_view status_name(CellStatus status);

struct SweepRow {
  std::string model;
  std::size_t n_nodes = 0;
  int n_classes = 0;
  int capacity_mb = 0;
  Algorithm algorithm = Algorithm::kKPath;
  int trial = 0;
  // Seed of the communication graph; algorithm seeds derive from it.
  std::uint64_t seed = 0;
  CellStatus status = CellStatus::kOk;
  std::size_t n_partitions = 0;
  double beta_s = 0.0;
  double bound_s = 0.0;
  double ratio = 0.0;
};

// Mean bottleneck per algorithm over cells where every algorithm succeeded.
struct PairedMeans {
  std::size_t cells = 0;
  std::map<Algorithm, double> mean_beta;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  // Keyed by node count.
  std::map<std::size_t, PairedMeans> by_nodes;
};

// Seed of the communication graph shared by all algorithms and class counts
// of one (nodes, trial) pair, so algorithms are compared on identical graphs.
std::uint64_t graph_seed(std::uint64_t seed, std::size_t n_nodes, int trial);
// Seed handed to a randomized algorithm in one cell.
std::uint64_t cell_seed(std::uint64_t graph_seed, int n_classes,
                        int capacity_mb, Algorithm algorithm);

SweepResult run_sweep(const ExperimentConfig& config);

std::string sweep_csv(const std::vector<SweepRow>& rows);
// Mean beta per (model, nodes, classes, capacity, algorithm); blank where no
// trial succeeded.
std::string aggregate_csv(const std::vector<SweepRow>& rows);
// Cross-algorithm ratios of the per-cell means, relative to k-path.
std::string ratio_csv(const std::vector<SweepRow>& rows);

// Writes sweep.csv, aggregate.csv and ratios.csv into `out_dir`, replacing
// earlier files of the same name.
void write_sweep_outputs(const SweepResult& result,
                         const std::filesystem::path& out_dir);

// ---------------------------------------------------------------------------
// Graph shapes.

struct ShapeConfig {
  std::filesystem::path model;
  int capacity_mb = 64;
  int n_classes = 2;
  std::vector<Shape> shapes = {Shape::kRing, Shape::kGrid, Shape::kCluster};
  std::vector<std::size_t> node_counts = {5, 9, 20};
  double spacing_m = 20.0;
  std::size_t batches = 1000;
  std::uint64_t seed = 1;
};

struct ShapeRow {
  Shape shape = Shape::kRing;
  std::size_t n_nodes = 0;
  double throughput_hz = 0.0;
  double e2e_latency_s = 0.0;
};

// One partitioning of the model, matched onto each shape and simulated.
std::vector<ShapeRow> run_shapes(const ShapeConfig& config);
std::vector<ShapeRow> run_shapes(const ShapeConfig& config,
                                 const PartitionGraph& graph);
std::string shapes_csv(const std::vector<ShapeRow>& rows);

// ---------------------------------------------------------------------------
// Analytic statistics.

struct StatisticsReport {
  RggStatistics rgg;
  std::vector<std::size_t> cluster_sizes;
  std::vector<double> average_degree;
  std::vector<double> largest_cluster;
};

StatisticsReport compute_statistics(const QuadratureSpec& spec = {},
                                    std::vector<std::size_t> sizes = {10, 50});
std::string dump_statistics(const StatisticsReport& report);

}  // namespace edgeslice

#endif  // EDGESLICE_EXPERIMENT_HPP_
