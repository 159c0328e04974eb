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

#ifndef EDGESLICE_PIPELINE_SIM_HPP_
#define EDGESLICE_PIPELINE_SIM_HPP_

#include <cstddef>
#include <span>
#include <vector>

#include "edgeslice/comm_graph.hpp"
#include "edgeslice/partitioner.hpp"
#include "edgeslice/placement.hpp"

namespace edgeslice {

struct PipelineRun {
  std::size_t batch_count = 0;
  double makespan = 0.0;             // seconds until the last batch finishes
  double measured_throughput = 0.0;  // batches / makespan
  double end_to_end_latency = 0.0;   // mean seconds from first send to finish
  std::vector<double> per_hop_busy_fraction;
};

// Tandem store-and-forward pipeline with one server per placement slot.
// Slot k < m computes its partition and then sends the result over hop k, so
// it is busy for c_k + T_k/B_k, the same per-hop cost the evaluator reports.
// The last slot only computes (c_m). Each server handles one batch at a time,
// queues are FIFO and unbounded, and the dispatcher has unlimited input: it
// starts the next batch the moment its own server is free.
//
// `compute_times` is empty (pure communication) or parallel to the slots.
PipelineRun simulate(const PartitionScheme& scheme, const Placement& placement,
                     const CommGraph& g, std::size_t batches,
                     std::span<const double> compute_times = {});

// Same simulation given per-hop transmit seconds (m entries) and per-slot
// compute seconds (empty or m + 1 entries).
PipelineRun simulate_stages(std::span<const double> hop_seconds,
                            std::span<const double> compute_times,
                            std::size_t batches);

}  // namespace edgeslice

#endif  // EDGESLICE_PIPELINE_SIM_HPP_
