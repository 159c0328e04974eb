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

#include <deque>
#include <queue>
#include <stdexcept>
#include <tuple>

#include "edgeslice/errors.hpp"
#include "edgeslice/evaluator.hpp"

namespace edgeslice {

namespace {

struct Stage {
  double service = 0.0;
  bool busy = false;
  std::size_t current = 0;
  std::deque<std::size_t> queue;
  double busy_time = 0.0;
};

struct Event {
  double time;
  std::size_t seq;
  std::size_t stage;

  bool operator>(const Event& o) const {
    return std::tie(time, seq) > std::tie(o.time, o.seq);
  }
};

}  // namespace

PipelineRun simulate_stages(std::span<const double> hop_seconds,
                            std::span<const double> compute_times,
                            std::size_t batches) {
  if (batches == 0) throw std::invalid_argument("need at least one batch");
  if (hop_seconds.empty()) throw LengthMismatchError("pipeline has no hops");
  if (!compute_times.empty() && compute_times.size() != hop_seconds.size() + 1) {
    throw LengthMismatchError("compute times must be parallel to the slots");
  }

  std::vector<Stage> stages;
  const auto compute = [&](std::size_t k) {
    return compute_times.empty() ? 0.0 : compute_times[k];
  };
  for (std::size_t k = 0; k < hop_seconds.size(); ++k) {
    stages.emplace_back().service = compute(k) + hop_seconds[k];
  }
  // The last slot only exists as a stage when it has work to do.
  if (compute(hop_seconds.size()) > 0.0) {
    stages.emplace_back().service = compute(hop_seconds.size());
  }

  std::priority_queue<Event, std::vector<Event>, std::greater<>> events;
  std::size_t seq = 0;
  std::vector<double> entered(batches, 0.0);
  std::size_t injected = 0;
  std::size_t completed = 0;
  double latency_sum = 0.0;
  double now = 0.0;

  auto start = [&](std::size_t s, std::size_t batch) {
    Stage& st = stages[s];
    st.busy = true;
    st.current = batch;
    st.busy_time += st.service;
    if (s == 0) entered[batch] = now;
    events.push({now + st.service, seq++, s});
  };
  auto arrive = [&](std::size_t s, std::size_t batch) {
    if (stages[s].busy) {
      stages[s].queue.push_back(batch);
    } else {
      start(s, batch);
    }
  };

  arrive(0, injected++);
  while (!events.empty()) {
    const Event e = events.top();
    events.pop();
    now = e.time;
    Stage& st = stages[e.stage];
    const std::size_t batch = st.current;
    st.busy = false;
    if (e.stage + 1 < stages.size()) {
      arrive(e.stage + 1, batch);
    } else {
      ++completed;
      latency_sum += now - entered[batch];
    }
    if (!st.queue.empty()) {
      const std::size_t next = st.queue.front();
      st.queue.pop_front();
      start(e.stage, next);
    } else if (e.stage == 0 && injected < batches) {
      start(0, injected++);
    }
  }

  PipelineRun run;
  run.batch_count = batches;
  run.makespan = now;
  run.measured_throughput = static_cast<double>(completed) / now;
  run.end_to_end_latency = latency_sum / static_cast<double>(completed);
  for (std::size_t k = 0; k < hop_seconds.size(); ++k) {
    run.per_hop_busy_fraction.push_back(stages[k].busy_time / now);
  }
  return run;
}

PipelineRun simulate(const PartitionScheme& scheme, const Placement& placement,
                     const CommGraph& g, std::size_t batches,
                     std::span<const double> compute_times) {
  // Pure transmit times; compute is added per stage by simulate_stages.
  const LatencyReport report = evaluate(scheme, placement, g);
  return simulate_stages(report.per_hop_latency, compute_times, batches);
}

}  // namespace edgeslice
