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

#include "edgeslice/comm_graph.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

#include "edgeslice/errors.hpp"
#include "json.hpp"

namespace edgeslice {

using json = nlohmann::json;

double bandwidth_for_distance_sq(double distance_sq,
                                 const BandwidthModel& model) {
  return std::log2(1.0 + model.signal_constant / distance_sq);
}

double bandwidth_at(double x, double y, const BandwidthModel& model) {
  const double b = model.wifi_range_m;
  auto admissible = [b](double v) {
    const double m = std::abs(v);
    return m > 1.0 && m < b;
  };
  if (!admissible(x) || !admissible(y)) {
    throw DomainError("position outside (-B,-1) U (1,B) on some axis");
  }
  return bandwidth_for_distance_sq(x * x + y * y, model);
}

CommGraph::CommGraph(std::vector<Position> positions,
                     const BandwidthModel& model)
    : positions_(std::move(positions)), model_(model) {
  const std::size_t n = positions_.size();
  if (n < 2) throw std::invalid_argument("communication graph needs >= 2 nodes");
  bw_.assign(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double dx = positions_[i].x - positions_[j].x;
      const double dy = positions_[i].y - positions_[j].y;
      const double d2 = std::max(dx * dx + dy * dy, model_.min_distance_sq);
      const double w = bandwidth_for_distance_sq(d2, model_);
      bw_[i * n + j] = w;
      bw_[j * n + i] = w;
    }
  }
  finish();
}

CommGraph::CommGraph(std::vector<Position> positions,
                     std::vector<double> bandwidths,
                     const BandwidthModel& model)
    : positions_(std::move(positions)), bw_(std::move(bandwidths)),
      model_(model) {
  const std::size_t n = positions_.size();
  if (n < 2) throw std::invalid_argument("communication graph needs >= 2 nodes");
  if (bw_.size() != n * n) {
    throw LengthMismatchError("bandwidth matrix is not n x n");
  }
  for (std::size_t i = 0; i < n; ++i) {
    bw_[i * n + i] = 0.0;
    for (std::size_t j = i + 1; j < n; ++j) {
      if (bw_[i * n + j] != bw_[j * n + i]) {
        throw ValidationError("bandwidth matrix is not symmetric");
      }
      if (!(bw_[i * n + j] > 0.0) || !std::isfinite(bw_[i * n + j])) {
        throw ValidationError("bandwidths must be finite and positive");
      }
    }
  }
  finish();
}

void CommGraph::finish() {
  max_bw_ = *std::max_element(bw_.begin(), bw_.end());
}

CommGraph CommGraph::subgraph(const std::vector<NodeId>& nodes) const {
  std::vector<Position> pos;
  std::vector<double> bw(nodes.size() * nodes.size(), 0.0);
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    pos.push_back(positions_[nodes[i]]);
    for (std::size_t j = 0; j < nodes.size(); ++j) {
      if (i != j) bw[i * nodes.size() + j] = bandwidth(nodes[i], nodes[j]);
    }
  }
  return CommGraph(std::move(pos), std::move(bw), model_);
}

CommGraph CommGraph::scaled(double factor) const {
  std::vector<double> bw = bw_;
  for (double& w : bw) w *= factor;
  return CommGraph(positions_, std::move(bw), model_);
}

namespace {

double draw_coordinate(std::mt19937_64& rng, double range) {
  std::uniform_real_distribution<double> magnitude(1.0, range);
  std::bernoulli_distribution negative(0.5);
  const double m = magnitude(rng);
  return negative(rng) ? -m : m;
}

}  // namespace

CommGraph generate_rgg(std::size_t n, std::uint64_t seed,
                       const BandwidthModel& model) {
  std::mt19937_64 rng(seed);
  std::vector<Position> pos(n);
  for (Position& p : pos) {
    p.x = draw_coordinate(rng, model.wifi_range_m);
    p.y = draw_coordinate(rng, model.wifi_range_m);
  }
  return CommGraph(std::move(pos), model);
}

Shape parse_shape(std::string_view name) {
  if (name == "ring") return Shape::kRing;
  if (name == "grid") return Shape::kGrid;
  if (name == "cluster") return Shape::kCluster;
  throw ParseError("unknown shape '" + std::string(name) + "'");
}

std::string_view shape_name(Shape shape) {
  switch (shape) {
    case Shape::kRing:
      return "ring";
    case Shape::kGrid:
      return "grid";
    case Shape::kCluster:
      return "cluster";
  }
  return "?";
}

CommGraph generate_shape(Shape shape, std::size_t n, double spacing,
                         std::uint64_t seed, const BandwidthModel& model) {
  if (n < 2) throw std::invalid_argument("shape needs >= 2 nodes");
  if (!(spacing > 0.0)) throw std::invalid_argument("spacing must be positive");
  std::vector<Position> pos;
  switch (shape) {
    case Shape::kRing:
      for (std::size_t i = 0; i < n; ++i) {
        const double angle = 2.0 * std::numbers::pi * static_cast<double>(i) /
                             static_cast<double>(n);
        pos.push_back({spacing * std::cos(angle), spacing * std::sin(angle)});
      }
      break;
    case Shape::kGrid: {
      std::size_t rows = 1;
      for (std::size_t r = 1; r * r <= n; ++r) {
        if (n % r == 0) rows = r;
      }
      const std::size_t cols = n / rows;
      for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) {
          pos.push_back({spacing * static_cast<double>(c),
                         spacing * static_cast<double>(r)});
        }
      }
      break;
    }
    case Shape::kCluster: {
      std::mt19937_64 rng(seed);
      std::normal_distribution<double> offset(0.0, spacing);
      const std::size_t first = (n + 1) / 2;
      for (std::size_t i = 0; i < n; ++i) {
        const double cx = (i < first ? -5.0 : 5.0) * spacing;
        const double dx = offset(rng);
        const double dy = offset(rng);
        pos.push_back({cx + dx, dy});
      }
      break;
    }
  }
  return CommGraph(std::move(pos), model);
}

std::string dump_comm_graph(const CommGraph& g) {
  json doc;
  doc["format"] = kCommFormat;
  doc["wifi_range_m"] = g.model().wifi_range_m;
  doc["signal_constant"] = g.model().signal_constant;
  doc["min_distance_sq"] = g.model().min_distance_sq;
  json pos = json::array();
  for (const Position& p : g.positions()) pos.push_back({p.x, p.y});
  doc["positions"] = std::move(pos);
  json rows = json::array();
  for (NodeId i = 0; i < g.size(); ++i) {
    json row = json::array();
    for (NodeId j = 0; j < g.size(); ++j) row.push_back(g.bandwidth(i, j));
    rows.push_back(std::move(row));
  }
  doc["bandwidth_mbps"] = std::move(rows);
  return doc.dump(2);
}

CommGraph parse_comm_graph(std::string_view text) {
  std::vector<Position> pos;
  std::vector<double> bw;
  BandwidthModel model;
  try {
    const json doc = json::parse(text);
    if (doc.value("format", "") != kCommFormat) {
      throw ParseError("communication graph must declare format \"" +
                       std::string(kCommFormat) + "\"");
    }
    model.wifi_range_m = doc.at("wifi_range_m").get<double>();
    model.signal_constant = doc.at("signal_constant").get<double>();
    model.min_distance_sq = doc.value("min_distance_sq", model.min_distance_sq);
    for (const json& p : doc.at("positions")) {
      pos.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
    }
    const json& rows = doc.at("bandwidth_mbps");
    if (rows.size() != pos.size()) {
      throw ParseError("bandwidth matrix row count differs from node count");
    }
    for (const json& row : rows) {
      if (row.size() != pos.size()) {
        throw ParseError("bandwidth matrix is not square");
      }
      for (const json& w : row) bw.push_back(w.get<double>());
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed communication graph: ") + e.what());
  }
  return CommGraph(std::move(pos), std::move(bw), model);
}

CommGraph load_comm_graph(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open communication graph " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_comm_graph(buf.str());
}

RggStatistics analytic_rgg_statistics(const QuadratureSpec& spec,
                                      const BandwidthModel& model) {
  if (spec.cells_per_axis < 1) throw std::invalid_argument("empty quadrature");
  const std::size_t n = spec.cells_per_axis;
  const double b = model.wifi_range_m;
  const double h = (b - 1.0) / static_cast<double>(n);
  // Uniform joint density: the expectation is the cell average.
  double sum = 0.0;
  double sum_sq = 0.0;
  for (int sx : {-1, 1}) {
    for (int sy : {-1, 1}) {
      for (std::size_t i = 0; i < n; ++i) {
        const double x = sx * (1.0 + h * (static_cast<double>(i) + 0.5));
        double row = 0.0;
        double row_sq = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
          const double y = sy * (1.0 + h * (static_cast<double>(j) + 0.5));
          const double r = bandwidth_for_distance_sq(x * x + y * y, model);
          row += r;
          row_sq += r * r;
        }
        sum += row;
        sum_sq += row_sq;
      }
    }
  }
  const double cells = 4.0 * static_cast<double>(n) * static_cast<double>(n);
  RggStatistics s;
  s.mean = sum / cells;
  s.stddev = std::sqrt(sum_sq / cells - s.mean * s.mean);
  s.cv = s.stddev / s.mean;
  s.threshold_distance_m = distance_for_bandwidth(s.mean, model);
  s.threshold_radius = s.threshold_distance_m / b;
  s.cluster_coefficient = rgg_cluster_coefficient(2);
  return s;
}

SampleMoments sample_router_bandwidth(std::size_t samples, std::uint64_t seed,
                                      const BandwidthModel& model) {
  if (samples < 2) throw std::invalid_argument("need >= 2 samples");
  std::mt19937_64 rng(seed);
  double mean = 0.0;
  double m2 = 0.0;
  for (std::size_t i = 0; i < samples; ++i) {
    const double x = draw_coordinate(rng, model.wifi_range_m);
    const double y = draw_coordinate(rng, model.wifi_range_m);
    const double r = bandwidth_for_distance_sq(x * x + y * y, model);
    // Welford update.
    const double delta = r - mean;
    mean += delta / static_cast<double>(i + 1);
    m2 += delta * (r - mean);
  }
  return {mean, std::sqrt(m2 / static_cast<double>(samples))};
}

double distance_for_bandwidth(double mbps, const BandwidthModel& model) {
  if (!(mbps > 0.0)) throw DomainError("bandwidth must be positive");
  return std::sqrt(model.signal_constant / (std::exp2(mbps) - 1.0));
}

double rgg_average_degree(std::size_t n, double radius, int dims) {
  const double d = static_cast<double>(dims);
  const double ball = std::pow(std::numbers::pi, d / 2.0) * std::pow(radius, d) /
                      std::tgamma((d + 2.0) / 2.0);
  return static_cast<double>(n) * std::exp2(d) * ball;
}

double largest_cluster_fraction(double alpha, std::size_t terms) {
  if (!(alpha > 0.0)) throw DomainError("average degree must be positive");
  const double log_x = std::log(alpha) - alpha;
  double sum = 0.0;
  for (std::size_t k = 1; k <= terms; ++k) {
    const double kd = static_cast<double>(k);
    sum += std::exp((kd - 1.0) * std::log(kd) - std::lgamma(kd + 1.0) +
                    kd * log_x);
  }
  return 1.0 - sum / alpha;
}

double rgg_cluster_coefficient(int dims) {
  if (dims < 2 || dims % 2 != 0) {
    throw DomainError("cluster coefficient series needs an even dimension");
  }
  double h = 0.0;
  for (int i = 1; i <= dims / 2; ++i) {
    h += std::tgamma(i) / std::tgamma(i + 0.5) * std::pow(0.75, i + 0.5);
  }
  return 1.0 - h / std::sqrt(std::numbers::pi);
}

}  // namespace edgeslice
