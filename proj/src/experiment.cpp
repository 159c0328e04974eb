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

#include "edgeslice/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>
#include <tuple>
#include <utility>

#include "edgeslice/baselines.hpp"
#include "edgeslice/errors.hpp"
#include "edgeslice/evaluator.hpp"
#include "edgeslice/model_graph.hpp"
#include "edgeslice/pipeline_sim.hpp"
#include "fmt/format.h"
#include "json.hpp"

namespace edgeslice {

using json = nlohmann::json;

std::uint64_t derive_seed(std::uint64_t base,
                          std::initializer_list<std::uint64_t> parts) {
  auto mix = [](std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  std::uint64_t h = mix(base);
  for (std::uint64_t p : parts) h = mix(h ^ mix(p));
  return h;
}

Algorithm parse_algorithm(std::string_view name) {
  if (name == "kpath") return Algorithm::kKPath;
  if (name == "joint") return Algorithm::kJoint;
  if (name == "random") return Algorithm::kRandom;
  throw ParseError("unknown algorithm '" + std::string(name) +
                   "' (expected kpath, joint or random)");
}

std::string_view algorithm_name(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::kKPath:
      return "kpath";
    case Algorithm::kJoint:
      return "joint";
    case Algorithm::kRandom:
      return "random";
  }
  return "?";
}

std::string_view status_name(CellStatus status) {
  switch (status) {
    case CellStatus::kOk:
      return "ok";
    case CellStatus::kInfeasible:
      return "infeasible";
    case CellStatus::kMatchingFailed:
      return "matching_failed";
  }
  return "?";
}

KPathOutcome run_kpath_pipeline(const PartitionGraph& graph,
                                const PartitionScheme& scheme,
                                const CommGraph& g, int n_classes,
                                std::uint64_t seed) {
  const std::vector<double> sizes = graph.candidate_transfer_sizes();
  int classes = n_classes;
  for (int attempt = 0;; ++attempt) {
    KPathOutcome out{scheme, {}, classes, attempt};
    relabel(out.scheme, fit_classifier(sizes, classes));
    try {
      out.placement = k_path_matching(
          out.scheme, g,
          attempt == 0 ? seed
                       : derive_seed(seed, {static_cast<std::uint64_t>(attempt)}));
      return out;
    } catch (const MatchingError&) {
      if (attempt == kMaxMatchingRetries) throw;
      classes = std::max(1, classes / 2);
    }
  }
}

KPathOutcome run_kpath_pipeline(const PartitionGraph& graph, const CommGraph& g,
                                int n_classes, std::uint64_t seed) {
  return run_kpath_pipeline(graph, optimal_partition(graph, {}), g, n_classes,
                            seed);
}

// ---------------------------------------------------------------------------

void ExperimentConfig::validate() const {
  if (models.empty()) throw ValidationError("config lists no models");
  if (node_counts.empty() || class_counts.empty() || capacities_mb.empty() ||
      algorithms.empty()) {
    throw ValidationError("config lists must be non-empty");
  }
  for (std::size_t n : node_counts) {
    if (n < 2) throw ValidationError("node counts must be at least 2");
  }
  for (int c : class_counts) {
    if (c < 1) throw ValidationError("class counts must be at least 1");
  }
  for (int mb : capacities_mb) {
    if (mb < 1) throw ValidationError("capacities must be positive");
  }
  if (trials < 1) throw ValidationError("trials must be at least 1");
  if (!(compression_ratio > 0.0)) {
    throw ValidationError("compression ratio must be positive");
  }
}

ExperimentConfig parse_config(std::string_view text,
                              const std::filesystem::path& base_dir) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("config: ") + e.what());
  }
  if (!doc.is_object() || doc.value("format", "") != kConfigFormat) {
    throw ParseError("config: expected format '" + std::string(kConfigFormat) +
                     "'");
  }
  ExperimentConfig c;
  try {
    for (const auto& m : doc.at("models")) {
      std::filesystem::path p = m.get<std::string>();
      c.models.push_back(p.is_relative() ? base_dir / p : p);
    }
    if (doc.contains("node_counts")) {
      c.node_counts = doc["node_counts"].get<std::vector<std::size_t>>();
    }
    if (doc.contains("class_counts")) {
      c.class_counts = doc["class_counts"].get<std::vector<int>>();
    }
    if (doc.contains("capacities_mb")) {
      c.capacities_mb = doc["capacities_mb"].get<std::vector<int>>();
    }
    c.trials = doc.value("trials", c.trials);
    c.seed = doc.value("seed", c.seed);
    c.compression_ratio = doc.value("compression_ratio", c.compression_ratio);
    c.threads = doc.value("threads", c.threads);
    if (doc.contains("algorithms")) {
      c.algorithms.clear();
      for (const auto& a : doc["algorithms"]) {
        c.algorithms.push_back(parse_algorithm(a.get<std::string>()));
      }
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("config: ") + e.what());
  }
  c.validate();
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open config '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path.parent_path());
}

std::string dump_config(const ExperimentConfig& config) {
  json doc;
  doc["format"] = kConfigFormat;
  json models = json::array();
  for (const auto& m : config.models) models.push_back(m.string());
  doc["models"] = std::move(models);
  doc["node_counts"] = config.node_counts;
  doc["class_counts"] = config.class_counts;
  doc["capacities_mb"] = config.capacities_mb;
  doc["trials"] = config.trials;
  doc["seed"] = config.seed;
  doc["compression_ratio"] = config.compression_ratio;
  json algs = json::array();
  for (Algorithm a : config.algorithms) algs.push_back(algorithm_name(a));
  doc["algorithms"] = std::move(algs);
  doc["threads"] = config.threads;
  return doc.dump(2);
}

std::uint64_t graph_seed(std::uint64_t seed, std::size_t n_nodes, int trial) {
  return derive_seed(seed, {n_nodes, static_cast<std::uint64_t>(trial)});
}

std::uint64_t cell_seed(std::uint64_t graph_seed, int n_classes,
                        int capacity_mb, Algorithm algorithm) {
  return derive_seed(graph_seed, {static_cast<std::uint64_t>(n_classes),
                                  static_cast<std::uint64_t>(capacity_mb),
                                  static_cast<std::uint64_t>(algorithm)});
}

namespace {

// Partitioning work that does not depend on the communication graph.
struct ModelCapacity {
  std::optional<PartitionGraph> graph;  // nullopt when no band fits
  std::optional<PartitionScheme> optimal;
};

struct Task {
  std::size_t model = 0;
  std::size_t nodes = 0;
  std::size_t capacity = 0;
  int trial = 0;
};

// Sort key so rows come out grouped by cell regardless of scheduling.
struct RowKey {
  std::size_t model, nodes, classes, capacity, algorithm;
  int trial;
  auto tie() const {
    return std::tie(model, nodes, classes, capacity, algorithm, trial);
  }
};

void fill_report(SweepRow& row, const PartitionScheme& scheme,
                 const Placement& placement, const CommGraph& g) {
  const LatencyReport r = evaluate(scheme, placement, g);
  row.status = CellStatus::kOk;
  row.n_partitions = scheme.size();
  row.beta_s = r.bottleneck;
  row.bound_s = r.theorem1_bound;
  row.ratio = r.approx_ratio;
}

std::string format_real(double v) { return fmt::format("{:.9g}", v); }

}  // namespace

SweepResult run_sweep(const ExperimentConfig& config) {
  config.validate();

  std::vector<std::string> names;
  std::vector<std::vector<ModelCapacity>> prepared;
  for (const auto& path : config.models) {
    names.push_back(path.stem().string());
    const ModelGraph mg = load_model_graph(path);
    const CandidatePoints points = candidate_partition_points(mg);
    PartitionOptions options;
    options.compression_ratio = config.compression_ratio;
    auto& per_cap = prepared.emplace_back();
    for (int mb : config.capacities_mb) {
      ModelCapacity mc;
      try {
        mc.graph = build_partition_graph(
            points, mg, std::int64_t{mb} * kBytesPerMegabyte, options);
        mc.optimal = optimal_partition(*mc.graph, {});
      } catch (const InfeasibleError&) {
        mc.graph.reset();
      }
      per_cap.push_back(std::move(mc));
    }
  }

  std::vector<Task> tasks;
  for (std::size_t m = 0; m < config.models.size(); ++m) {
    for (std::size_t n = 0; n < config.node_counts.size(); ++n) {
      for (std::size_t c = 0; c < config.capacities_mb.size(); ++c) {
        for (int t = 0; t < config.trials; ++t) tasks.push_back({m, n, c, t});
      }
    }
  }

  std::vector<std::vector<std::pair<RowKey, SweepRow>>> produced(tasks.size());
  auto run_task = [&](std::size_t index) {
    const Task& task = tasks[index];
    const std::size_t n_nodes = config.node_counts[task.nodes];
    const int capacity_mb = config.capacities_mb[task.capacity];
    const std::uint64_t gseed = graph_seed(config.seed, n_nodes, task.trial);
    const CommGraph g = generate_rgg(n_nodes, gseed);
    const ModelCapacity& mc = prepared[task.model][task.capacity];

    // Joint optimization ignores the class count; compute it once.
    std::optional<BaselineResult> joint;
    bool joint_done = false;

    auto& out = produced[index];
    for (std::size_t ci = 0; ci < config.class_counts.size(); ++ci) {
      const int n_classes = config.class_counts[ci];
      for (std::size_t ai = 0; ai < config.algorithms.size(); ++ai) {
        const Algorithm alg = config.algorithms[ai];
        SweepRow row;
        row.model = names[task.model];
        row.n_nodes = n_nodes;
        row.n_classes = n_classes;
        row.capacity_mb = capacity_mb;
        row.algorithm = alg;
        row.trial = task.trial;
        row.seed = gseed;
        row.status = CellStatus::kInfeasible;
        if (mc.graph) {
          const std::uint64_t seed =
              cell_seed(gseed, n_classes, capacity_mb, alg);
          try {
            switch (alg) {
              case Algorithm::kKPath: {
                const KPathOutcome o = run_kpath_pipeline(
                    *mc.graph, *mc.optimal, g, n_classes, seed);
                fill_report(row, o.scheme, o.placement, g);
                break;
              }
              case Algorithm::kJoint: {
                if (!joint_done) {
                  joint_done = true;
                  try {
                    joint = joint_optimization_baseline(*mc.graph, g);
                  } catch (const InfeasibleError&) {
                  }
                }
                if (joint) fill_report(row, joint->scheme, joint->placement, g);
                break;
              }
              case Algorithm::kRandom: {
                const BaselineResult r = random_baseline(*mc.graph, g, seed);
                fill_report(row, r.scheme, r.placement, g);
                break;
              }
            }
          } catch (const InfeasibleError&) {
            row.status = CellStatus::kInfeasible;
          } catch (const MatchingError&) {
            row.status = CellStatus::kMatchingFailed;
          }
        }
        out.emplace_back(RowKey{task.model, task.nodes, ci, task.capacity, ai,
                                task.trial},
                         std::move(row));
      }
    }
  };

  std::size_t workers = config.threads;
  if (workers == 0) workers = std::max(1U, std::thread::hardware_concurrency());
  workers = std::min(workers, tasks.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  auto worker = [&] {
    for (std::size_t i = next++; i < tasks.size(); i = next++) {
      try {
        run_task(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mu);
        if (!failure) failure = std::current_exception();
        next = tasks.size();
      }
    }
  };
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  std::vector<std::pair<RowKey, SweepRow>> keyed;
  for (auto& batch : produced) {
    for (auto& kr : batch) keyed.push_back(std::move(kr));
  }
  std::sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) {
    return a.first.tie() < b.first.tie();
  });

  SweepResult result;
  for (auto& [key, row] : keyed) result.rows.push_back(std::move(row));

  // Paired means over (model, nodes, classes, capacity, trial) groups.
  const std::size_t n_algs = config.algorithms.size();
  std::map<std::size_t, std::map<Algorithm, double>> sums;
  std::map<std::tuple<std::size_t, std::size_t, std::size_t, std::size_t, int>,
           std::vector<const SweepRow*>>
      cells;
  for (std::size_t i = 0; i < keyed.size(); ++i) {
    const RowKey& k = keyed[i].first;
    cells[{k.model, k.nodes, k.classes, k.capacity, k.trial}].push_back(
        &result.rows[i]);
  }
  for (const auto& [key, group] : cells) {
    const bool all_ok =
        group.size() == n_algs &&
        std::all_of(group.begin(), group.end(), [](const SweepRow* r) {
          return r->status == CellStatus::kOk;
        });
    if (!all_ok) continue;
    const std::size_t n_nodes = group.front()->n_nodes;
    PairedMeans& pm = result.by_nodes[n_nodes];
    ++pm.cells;
    for (const SweepRow* r : group) sums[n_nodes][r->algorithm] += r->beta_s;
  }
  for (auto& [n_nodes, pm] : result.by_nodes) {
    for (const auto& [alg, total] : sums[n_nodes]) {
      pm.mean_beta[alg] = total / static_cast<double>(pm.cells);
    }
  }
  return result;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::string out = fmt::format("# {}\n", kSweepFormat);
  out +=
      "model,n_nodes,n_classes,capacity_mb,algorithm,trial,seed,status,"
      "n_partitions,beta_s,bound_s,ratio\n";
  for (const SweepRow& r : rows) {
    out += fmt::format("{},{},{},{},{},{},{},{},", r.model, r.n_nodes,
                       r.n_classes, r.capacity_mb, algorithm_name(r.algorithm),
                       r.trial, r.seed, status_name(r.status));
    if (r.status == CellStatus::kOk) {
      out += fmt::format("{},{},{},{}\n", r.n_partitions, format_real(r.beta_s),
                         format_real(r.bound_s), format_real(r.ratio));
    } else {
      out += ",,,\n";
    }
  }
  return out;
}

namespace {

struct CellMean {
  std::size_t ok = 0;
  double sum = 0.0;
  double mean() const { return sum / static_cast<double>(ok); }
};

using CellKey = std::tuple<std::string, std::size_t, int, int>;

// Cells in first-appearance order with per-algorithm means.
struct CellTable {
  std::vector<CellKey> order;
  std::map<CellKey, std::map<Algorithm, CellMean>> means;
  std::vector<Algorithm> algorithms;
};

CellTable tabulate(const std::vector<SweepRow>& rows) {
  CellTable t;
  for (const SweepRow& r : rows) {
    const CellKey key{r.model, r.n_nodes, r.n_classes, r.capacity_mb};
    auto [it, inserted] = t.means.try_emplace(key);
    if (inserted) t.order.push_back(key);
    CellMean& m = it->second[r.algorithm];
    if (r.status == CellStatus::kOk) {
      ++m.ok;
      m.sum += r.beta_s;
    }
    if (std::find(t.algorithms.begin(), t.algorithms.end(), r.algorithm) ==
        t.algorithms.end()) {
      t.algorithms.push_back(r.algorithm);
    }
  }
  return t;
}

}  // namespace

std::string aggregate_csv(const std::vector<SweepRow>& rows) {
  const CellTable t = tabulate(rows);
  std::string out = fmt::format("# {}\n", kAggregateFormat);
  out += "model,n_nodes,n_classes,capacity_mb,algorithm,ok_trials,mean_beta_s\n";
  for (const CellKey& key : t.order) {
    const auto& [model, nodes, classes, cap] = key;
    for (Algorithm a : t.algorithms) {
      const auto& per_alg = t.means.at(key);
      const auto it = per_alg.find(a);
      if (it == per_alg.end()) continue;
      out += fmt::format("{},{},{},{},{},{},{}\n", model, nodes, classes, cap,
                         algorithm_name(a), it->second.ok,
                         it->second.ok ? format_real(it->second.mean()) : "");
    }
  }
  return out;
}

std::string ratio_csv(const std::vector<SweepRow>& rows) {
  const CellTable t = tabulate(rows);
  std::string out = fmt::format("# {}\n", kRatioFormat);
  out +=
      "model,n_nodes,n_classes,capacity_mb,random_over_kpath,"
      "joint_over_kpath\n";
  auto ratio = [](const std::map<Algorithm, CellMean>& m, Algorithm a) {
    const auto num = m.find(a);
    const auto den = m.find(Algorithm::kKPath);
    if (num == m.end() || den == m.end() || num->second.ok == 0 ||
        den->second.ok == 0) {
      return std::string();
    }
    return format_real(num->second.mean() / den->second.mean());
  };
  for (const CellKey& key : t.order) {
    const auto& [model, nodes, classes, cap] = key;
    const auto& m = t.means.at(key);
    out += fmt::format("{},{},{},{},{},{}\n", model, nodes, classes, cap,
                       ratio(m, Algorithm::kRandom),
                       ratio(m, Algorithm::kJoint));
  }
  return out;
}

void write_sweep_outputs(const SweepResult& result,
                         const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  auto write = [&](const char* name, const std::string& text) {
    std::ofstream f(out_dir / name, std::ios::binary | std::ios::trunc);
    if (!f) throw Error("cannot write '" + (out_dir / name).string() + "'");
    f << text;
  };
  write("sweep.csv", sweep_csv(result.rows));
  write("aggregate.csv", aggregate_csv(result.rows));
  write("ratios.csv", ratio_csv(result.rows));
}

// ---------------------------------------------------------------------------

std::vector<ShapeRow> run_shapes(const ShapeConfig& config) {
  const ModelGraph mg = load_model_graph(config.model);
  const PartitionGraph graph =
      build_partition_graph(candidate_partition_points(mg), mg,
                            std::int64_t{config.capacity_mb} * kBytesPerMegabyte);
  return run_shapes(config, graph);
}

std::vector<ShapeRow> run_shapes(const ShapeConfig& config,
                                 const PartitionGraph& graph) {
  const PartitionScheme scheme = optimal_partition(graph, {});
  std::vector<ShapeRow> rows;
  for (std::size_t n : config.node_counts) {
    for (Shape shape : config.shapes) {
      const std::uint64_t seed =
          derive_seed(config.seed, {static_cast<std::uint64_t>(shape), n});
      const CommGraph g = generate_shape(shape, n, config.spacing_m, seed);
      const KPathOutcome o =
          run_kpath_pipeline(graph, scheme, g, config.n_classes, seed);
      const PipelineRun run = simulate(o.scheme, o.placement, g, config.batches);
      rows.push_back({shape, n, run.measured_throughput, run.end_to_end_latency});
    }
  }
  return rows;
}

std::string shapes_csv(const std::vector<ShapeRow>& rows) {
  std::string out = fmt::format("# {}\n", kShapesFormat);
  out += "shape,n_nodes,throughput_hz,e2e_latency_s\n";
  for (const ShapeRow& r : rows) {
    out += fmt::format("{},{},{},{}\n", shape_name(r.shape), r.n_nodes,
                       format_real(r.throughput_hz),
                       format_real(r.e2e_latency_s));
  }
  return out;
}

// ---------------------------------------------------------------------------

StatisticsReport compute_statistics(const QuadratureSpec& spec,
                                    std::vector<std::size_t> sizes) {
  StatisticsReport r;
  r.rgg = analytic_rgg_statistics(spec);
  r.cluster_sizes = std::move(sizes);
  for (std::size_t n : r.cluster_sizes) {
    const double alpha = rgg_average_degree(n, r.rgg.threshold_radius);
    r.average_degree.push_back(alpha);
    r.largest_cluster.push_back(largest_cluster_fraction(alpha, n));
  }
  return r;
}

std::string dump_statistics(const StatisticsReport& report) {
  json doc;
  doc["mean_mbps"] = report.rgg.mean;
  doc["stddev_mbps"] = report.rgg.stddev;
  doc["cv"] = report.rgg.cv;
  doc["threshold_distance_m"] = report.rgg.threshold_distance_m;
  doc["threshold_radius"] = report.rgg.threshold_radius;
  doc["cluster_coefficient"] = report.rgg.cluster_coefficient;
  json clusters = json::array();
  for (std::size_t i = 0; i < report.cluster_sizes.size(); ++i) {
    clusters.push_back({{"n", report.cluster_sizes[i]},
                        {"average_degree", report.average_degree[i]},
                        {"largest_cluster_fraction", report.largest_cluster[i]}});
  }
  doc["clusters"] = std::move(clusters);
  return doc.dump(2);
}

}  // namespace edgeslice
