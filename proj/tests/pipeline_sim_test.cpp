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

#include "edgeslice/pipeline_sim.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "doctest.h"
#include "edgeslice/errors.hpp"
#include "edgeslice/evaluator.hpp"
#include "edgeslice/experiment.hpp"

namespace edgeslice {
namespace {

const std::string kFixtures = EDGESLICE_FIXTURE_DIR;

// Tandem-queue departure recursion with closed-loop input: batch i enters
// when batch i-1 leaves the first server.
struct Recursion {
  double makespan = 0.0;
  double latency = 0.0;
};

Recursion departure_recursion(const std::vector<double>& service,
                              std::size_t batches) {
  std::vector<double> prev(service.size(), 0.0);
  double latency_sum = 0.0;
  for (std::size_t i = 0; i < batches; ++i) {
    std::vector<double> cur(service.size());
    const double start = i == 0 ? 0.0 : prev[0];
    double ready = start;
    for (std::size_t k = 0; k < service.size(); ++k) {
      const double begin = i == 0 ? ready : std::max(ready, prev[k]);
      cur[k] = begin + service[k];
      ready = cur[k];
    }
    latency_sum += cur.back() - start;
    prev = std::move(cur);
  }
  return {prev.back(), latency_sum / static_cast<double>(batches)};
}

TEST_CASE("single hop") {
  const std::vector<double> hops{2.0};
  const PipelineRun r = simulate_stages(hops, {}, 10);
  CHECK(r.batch_count == 10);
  CHECK(r.makespan == doctest::Approx(20.0));
  CHECK(r.measured_throughput == doctest::Approx(0.5));
  CHECK(r.end_to_end_latency == doctest::Approx(2.0));
  CHECK(r.per_hop_busy_fraction == std::vector<double>{1.0});
}

TEST_CASE("two hops reach the bottleneck rate") {
  const std::vector<double> hops{2.0, 1.0};
  const PipelineRun r = simulate_stages(hops, {}, 1000);
  CHECK(r.makespan == doctest::Approx(2001.0));
  CHECK(r.measured_throughput == doctest::Approx(0.5).epsilon(0.02));
  CHECK(r.end_to_end_latency == doctest::Approx(3.0));
  CHECK(r.per_hop_busy_fraction[0] == doctest::Approx(1.0).epsilon(0.001));
  CHECK(r.per_hop_busy_fraction[1] == doctest::Approx(0.5).epsilon(0.001));
}

TEST_CASE("one batch takes the sum of its stages") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.01, 3.0);
  for (int t = 0; t < 100; ++t) {
    std::vector<double> hops(1 + t % 7);
    for (double& h : hops) h = u(rng);
    std::vector<double> compute;
    if (t % 2) {
      compute.resize(hops.size() + 1);
      for (double& c : compute) c = u(rng);
    }
    const double sum = std::accumulate(hops.begin(), hops.end(), 0.0) +
                       std::accumulate(compute.begin(), compute.end(), 0.0);
    const PipelineRun r = simulate_stages(hops, compute, 1);
    CHECK(r.end_to_end_latency == doctest::Approx(sum).epsilon(1e-12));
    CHECK(r.makespan == doctest::Approx(sum).epsilon(1e-12));
  }
}

TEST_CASE("event loop agrees with the departure recursion") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0.01, 3.0);
  for (int t = 0; t < 200; ++t) {
    std::vector<double> hops(1 + t % 6);
    for (double& h : hops) h = u(rng);
    std::vector<double> compute;
    std::vector<double> service = hops;
    if (t % 3) {
      compute.resize(hops.size() + 1);
      for (double& c : compute) c = t % 3 == 1 ? u(rng) : 0.0;
      for (std::size_t k = 0; k < hops.size(); ++k) service[k] += compute[k];
      if (compute.back() > 0.0) service.push_back(compute.back());
    }
    const std::size_t batches = 1 + t % 40;
    const Recursion expected = departure_recursion(service, batches);
    const PipelineRun r = simulate_stages(hops, compute, batches);
    CHECK(r.makespan == doctest::Approx(expected.makespan).epsilon(1e-9));
    CHECK(r.end_to_end_latency == doctest::Approx(expected.latency).epsilon(1e-9));
    CHECK(r.measured_throughput * r.makespan ==
          doctest::Approx(static_cast<double>(batches)));
    const double slowest = *std::max_element(service.begin(), service.end());
    CHECK(r.measured_throughput <= 1.0 / slowest * (1 + 1e-9));
    CHECK(r.end_to_end_latency >=
          std::accumulate(service.begin(), service.end(), 0.0) * (1 - 1e-12));
  }
}

TEST_CASE("throughput converges to the inverse bottleneck") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.05, 2.0);
  for (int t = 0; t < 50; ++t) {
    std::vector<double> hops(2 + t % 5);
    for (double& h : hops) h = u(rng);
    const double beta = *std::max_element(hops.begin(), hops.end());
    const PipelineRun r = simulate_stages(hops, {}, 1000);
    CHECK(r.measured_throughput == doctest::Approx(1.0 / beta).epsilon(0.02));
    const std::size_t b = static_cast<std::size_t>(
        std::max_element(hops.begin(), hops.end()) - hops.begin());
    CHECK(r.per_hop_busy_fraction[b] == doctest::Approx(1.0).epsilon(0.02));
  }
}

TEST_CASE("argument checks") {
  const std::vector<double> hops{1.0, 1.0};
  CHECK_THROWS_AS(simulate_stages(hops, {}, 0), std::invalid_argument);
  CHECK_THROWS_AS(simulate_stages({}, {}, 3), LengthMismatchError);
  const std::vector<double> compute{1.0, 1.0};
  CHECK_THROWS_AS(simulate_stages(hops, compute, 3), LengthMismatchError);

  PartitionScheme scheme;
  scheme.partitions.resize(3);
  scheme.transfer_sizes = {1.0, 1.0, 1.0};
  Placement p;
  p.nodes = {0, 1};
  CHECK_THROWS_AS(simulate(scheme, p, generate_rgg(3, 1), 5), LengthMismatchError);
}

TEST_CASE("simulate uses the evaluated hop latencies") {
  const ModelGraph m = load_model_graph(kFixtures + "/resnet50_like.json");
  const PartitionGraph pg = build_partition_graph(
      candidate_partition_points(m), m, 64 * kBytesPerMegabyte);
  const CommGraph g = generate_rgg(20, 5);
  const KPathOutcome k = run_kpath_pipeline(pg, g, 2, 5);
  const LatencyReport report = evaluate(k.scheme, k.placement, g);
  const PipelineRun one = simulate(k.scheme, k.placement, g, 1);
  CHECK(one.end_to_end_latency ==
        doctest::Approx(std::accumulate(report.per_hop_latency.begin(),
                                        report.per_hop_latency.end(), 0.0)));
  const PipelineRun many = simulate(k.scheme, k.placement, g, 1000);
  CHECK(many.measured_throughput ==
        doctest::Approx(report.throughput).epsilon(0.02));
}

TEST_CASE("grid outruns ring on five nodes") {
  const ModelGraph m = load_model_graph(kFixtures + "/resnet50_like.json");
  const PartitionGraph pg = build_partition_graph(
      candidate_partition_points(m), m, 64 * kBytesPerMegabyte);
  const CommGraph ring = generate_shape(Shape::kRing, 5, 20.0);
  const CommGraph grid = generate_shape(Shape::kGrid, 5, 20.0);
  const KPathOutcome on_ring = run_kpath_pipeline(pg, ring, 2, 1);
  const KPathOutcome on_grid = run_kpath_pipeline(pg, grid, 2, 1);
  const PipelineRun r = simulate(on_ring.scheme, on_ring.placement, ring, 1000);
  const PipelineRun q = simulate(on_grid.scheme, on_grid.placement, grid, 1000);
  MESSAGE("ring ", r.measured_throughput, " Hz, grid ", q.measured_throughput, " Hz");
  CHECK(q.measured_throughput > r.measured_throughput);
}

}  // namespace
}  // namespace edgeslice
