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

#ifndef EDGESLICE_COMM_GRAPH_HPP_
#define EDGESLICE_COMM_GRAPH_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace edgeslice {

inline constexpr std::string_view kCommFormat = "edgeslice-comm/1";

using NodeId = std::size_t;

// Shannon-capacity bandwidth with inverse-square signal decay.
struct BandwidthModel {
  double wifi_range_m = 150.0;
  // Calibrated so that 80 m from the router yields 5.5 Mbps.
  double signal_constant = 283230.0;
  // Floor on squared pairwise distance; the position domain excludes 1 m
  // around each axis, so x^2 + y^2 >= 2 for any admissible position.
  double min_distance_sq = 2.0;
};

// Bandwidth in Mbps for a squared distance (no domain check).
double bandwidth_for_distance_sq(double distance_sq,
                                 const BandwidthModel& model = {});

// Device-to-router bandwidth at position (x, y). Throws DomainError unless
// 1 < |x| < B and 1 < |y| < B.
double bandwidth_at(double x, double y, const BandwidthModel& model = {});

struct Position {
  double x = 0.0;
  double y = 0.0;
};

// Complete, symmetric, positively weighted graph of compute nodes.
class CommGraph {
 public:
  CommGraph(std::vector<Position> positions, const BandwidthModel& model);
  // Explicit matrix (row-major n*n); validated for symmetry and positivity.
  CommGraph(std::vector<Position> positions, std::vector<double> bandwidths,
            const BandwidthModel& model);

  std::size_t size() const { return positions_.size(); }
  const std::vector<Position>& positions() const { return positions_; }
  double bandwidth(NodeId a, NodeId b) const { return bw_[a * size() + b]; }
  double max_bandwidth() const { return max_bw_; }
  const BandwidthModel& model() const { return model_; }

  // Node subset as a new graph (ids renumbered in the given order).
  CommGraph subgraph(const std::vector<NodeId>& nodes) const;
  // Same topology with every bandwidth multiplied by `factor`.
  CommGraph scaled(double factor) const;

 private:
  void finish();

  std::vector<Position> positions_;
  std::vector<double> bw_;
  BandwidthModel model_;
  double max_bw_ = 0.0;
};

// Uniform positions on (-B,-1) U (1,B) per axis; deterministic in `seed`.
CommGraph generate_rgg(std::size_t n, std::uint64_t seed,
                       const BandwidthModel& model = {});

enum class Shape { kRing, kGrid, kCluster };

Shape parse_shape(std::string_view name);
std::string_view shape_name(Shape shape);

// Ring: n points on a circle of radius `spacing`. Grid: rows x cols with the
// most square factorization (rows <= cols), `spacing` apart. Cluster: two
// Gaussian blobs of ceil(n/2) and floor(n/2) nodes with standard deviation
// `spacing` and centers 10 * spacing apart.
CommGraph generate_shape(Shape shape, std::size_t n, double spacing,
                         std::uint64_t seed = 0,
                         const BandwidthModel& model = {});

std::string dump_comm_graph(const CommGraph& g);
CommGraph parse_comm_graph(std::string_view text);
CommGraph load_comm_graph(const std::filesystem::path& path);

// Moments of the device-to-router bandwidth for uniform positions, plus the
// random-geometric-graph quantities of the above-mean subgraph.
struct RggStatistics {
  double mean = 0.0;
  double stddev = 0.0;
  double cv = 0.0;
  // Distance at which the bandwidth equals the mean, and that distance
  // scaled by the router range.
  double threshold_distance_m = 0.0;
  double threshold_radius = 0.0;
  double cluster_coefficient = 0.0;
};

struct QuadratureSpec {
  // Midpoint cells per axis in each of the four quadrants.
  std::size_t cells_per_axis = 2000;
};

RggStatistics analytic_rgg_statistics(const QuadratureSpec& spec = {},
                                      const BandwidthModel& model = {});

// Monte-Carlo mean and standard deviation of the device-to-router bandwidth.
struct SampleMoments {
  double mean = 0.0;
  double stddev = 0.0;
};
SampleMoments sample_router_bandwidth(std::size_t samples, std::uint64_t seed,
                                      const BandwidthModel& model = {});

// Distance from the router at which the bandwidth equals `mbps`.
double distance_for_bandwidth(double mbps, const BandwidthModel& model = {});

// Expected degree of a d-dimensional RGG with connection radius r on n nodes.
double rgg_average_degree(std::size_t n, double radius, int dims = 2);

// Fraction of vertices in the giant component for average degree alpha,
// summing the tree-size series up to `terms` (the subgraph vertex count).
double largest_cluster_fraction(double alpha, std::size_t terms);

// High-dimension-series clustering coefficient of an RGG in `dims`
// dimensions (dims even).
double rgg_cluster_coefficient(int dims = 2);

}  // namespace edgeslice

#endif  // EDGESLICE_COMM_GRAPH_HPP_
