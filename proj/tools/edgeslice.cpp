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

// Command-line front end. Exit codes: 0 success, 1 other failure, 2 parse or
// usage error, 3 infeasible instance, 4 matching failure.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "edgeslice/comm_graph.hpp"
#include "edgeslice/errors.hpp"
#include "edgeslice/evaluator.hpp"
#include "edgeslice/experiment.hpp"
#include "edgeslice/model_graph.hpp"
#include "edgeslice/partitioner.hpp"
#include "edgeslice/placement.hpp"
#include "fmt/format.h"
#include "json.hpp"

namespace {

using namespace edgeslice;
namespace fs = std::filesystem;

enum ExitCode {
  kOk = 0,
  kOther = 1,
  kParse = 2,
  kInfeasible = 3,
  kMatching = 4,
};

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Writes to `path`, or stdout when empty.
void emit(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << '\n';
    return;
  }
  if (const fs::path dir = fs::path(path).parent_path(); !dir.empty()) {
    fs::create_directories(dir);
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write '" + path + "'");
  out << text;
}

std::int64_t capacity_bytes(std::optional<int> mb) {
  return mb ? std::int64_t{*mb} * kBytesPerMegabyte : kUnlimitedCapacity;
}

PartitionGraph partition_graph_for(const fs::path& model,
                                   std::optional<int> capacity_mb,
                                   double compression) {
  const ModelGraph mg = load_model_graph(model);
  PartitionOptions opts;
  opts.compression_ratio = compression;
  return build_partition_graph(candidate_partition_points(mg), mg,
                               capacity_bytes(capacity_mb), opts);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Partition DNN models and place them on wireless edge clusters"};
  app.require_subcommand(1);

  std::string model_path;
  std::optional<int> capacity_mb;
  int n_classes = 5;
  double compression = kDefaultCompressionRatio;
  std::uint64_t seed = 1;
  std::string out_path;

  // partition
  auto* partition = app.add_subcommand("partition", "Optimal partition scheme");
  partition->add_option("--model", model_path, "Model graph file")->required();
  partition->add_option("--capacity-mb", capacity_mb, "Node memory in MiB");
  partition->add_option("--classes", n_classes, "Transfer-size classes");
  partition->add_option("--compression", compression, "Compression ratio");
  partition->add_option("--out", out_path, "Output file (default stdout)");

  // place
  std::string scheme_path, comm_path;
  std::size_t n_nodes = 10;
  auto* place = app.add_subcommand("place", "Match a scheme onto a cluster");
  place->add_option("--scheme", scheme_path, "Scheme file")->required();
  place->add_option("--comm", comm_path, "Communication graph file");
  place->add_option("--nodes", n_nodes, "Random graph size when --comm is absent");
  place->add_option("--seed", seed, "Seed");
  place->add_option("--out", out_path, "Output file (default stdout)");

  // graph
  std::string shape;
  double spacing = 20.0;
  auto* graph = app.add_subcommand("graph", "Generate a communication graph");
  graph->add_option("--nodes", n_nodes, "Node count");
  graph->add_option("--seed", seed, "Seed");
  graph->add_option("--shape", shape, "ring, grid or cluster (default random)");
  graph->add_option("--spacing", spacing, "Shape spacing in meters");
  graph->add_option("--out", out_path, "Output file (default stdout)");

  // sweep
  std::string config_path, out_dir = "results";
  std::optional<int> trials;
  std::optional<std::uint64_t> sweep_seed;
  std::optional<std::size_t> threads;
  auto* sweep = app.add_subcommand("sweep", "Run the experiment grid");
  sweep->add_option("--config", config_path, "Config file")->required();
  sweep->add_option("--out-dir", out_dir, "Directory for CSV output");
  sweep->add_option("--trials", trials, "Override trials");
  sweep->add_option("--seed", sweep_seed, "Override seed");
  sweep->add_option("--threads", threads, "Worker threads (0 = all cores)");

  // shapes
  ShapeConfig shape_cfg;
  std::vector<std::string> shape_names;
  auto* shapes = app.add_subcommand("shapes", "Simulate pipelines on shapes");
  shapes->add_option("--model", model_path, "Model graph file")->required();
  shapes->add_option("--capacity-mb", shape_cfg.capacity_mb, "Node memory");
  shapes->add_option("--classes", shape_cfg.n_classes, "Transfer-size classes");
  shapes->add_option("--shapes", shape_names, "Shapes")->delimiter(',');
  shapes->add_option("--nodes", shape_cfg.node_counts, "Node counts")
      ->delimiter(',');
  shapes->add_option("--spacing", shape_cfg.spacing_m, "Spacing in meters");
  shapes->add_option("--batches", shape_cfg.batches, "Simulated batches");
  shapes->add_option("--seed", shape_cfg.seed, "Seed");
  shapes->add_option("--out", out_path, "Output file (default stdout)");

  // stats
  std::size_t cells = QuadratureSpec{}.cells_per_axis;
  auto* stats = app.add_subcommand("stats", "Analytic bandwidth statistics");
  stats->add_option("--cells", cells, "Quadrature cells per axis");
  stats->add_option("--out", out_path, "Output file (default stdout)");

  // oracle
  auto* oracle = app.add_subcommand("oracle", "Exhaustive optimum (small only)");
  oracle->add_option("--model", model_path, "Model graph file")->required();
  oracle->add_option("--capacity-mb", capacity_mb, "Node memory in MiB");
  oracle->add_option("--comm", comm_path, "Communication graph file");
  oracle->add_option("--nodes", n_nodes, "Random graph size when --comm is absent");
  oracle->add_option("--seed", seed, "Seed");
  oracle->add_option("--out", out_path, "Output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kParse;
  }

  try {
    auto comm_graph = [&] {
      return comm_path.empty() ? generate_rgg(n_nodes, seed)
                               : load_comm_graph(comm_path);
    };

    if (*partition) {
      const PartitionGraph pg =
          partition_graph_for(model_path, capacity_mb, compression);
      const TransferClassifier classifier =
          fit_classifier(pg.candidate_transfer_sizes(), n_classes);
      emit(out_path, dump_scheme(optimal_partition(pg, classifier)));
    } else if (*place) {
      const PartitionScheme scheme = parse_scheme(read_file(scheme_path));
      const CommGraph g = comm_graph();
      const Placement p = k_path_matching(scheme, g, seed);
      emit(out_path, dump_placement_report(scheme, p, g, evaluate(scheme, p, g)));
    } else if (*graph) {
      const CommGraph g =
          shape.empty() ? generate_rgg(n_nodes, seed)
                        : generate_shape(parse_shape(shape), n_nodes, spacing, seed);
      emit(out_path, dump_comm_graph(g));
    } else if (*sweep) {
      ExperimentConfig config = load_config(config_path);
      if (trials) config.trials = *trials;
      if (sweep_seed) config.seed = *sweep_seed;
      if (threads) config.threads = *threads;
      const SweepResult result = run_sweep(config);
      write_sweep_outputs(result, out_dir);
      for (const auto& [nodes, pm] : result.by_nodes) {
        std::string line = fmt::format("nodes={} paired_cells={}", nodes, pm.cells);
        for (const auto& [alg, mean] : pm.mean_beta) {
          line += fmt::format(" {}={:.6g}", algorithm_name(alg), mean);
        }
        std::cout << line << '\n';
      }
    } else if (*shapes) {
      shape_cfg.model = model_path;
      if (!shape_names.empty()) {
        shape_cfg.shapes.clear();
        for (const auto& s : shape_names) shape_cfg.shapes.push_back(parse_shape(s));
      }
      emit(out_path, shapes_csv(run_shapes(shape_cfg)));
    } else if (*stats) {
      QuadratureSpec spec;
      spec.cells_per_axis = cells;
      emit(out_path, dump_statistics(compute_statistics(spec)));
    } else if (*oracle) {
      const PartitionGraph pg =
          partition_graph_for(model_path, capacity_mb, kDefaultCompressionRatio);
      const CommGraph g = comm_graph();
      const OracleResult r = brute_force_optimum(pg, g);
      emit(out_path, dump_placement_report(r.scheme, r.placement, g, r.report));
    }
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kParse;
  } catch (const InfeasibleError& e) {
    std::cerr << "infeasible: " << e.what() << '\n';
    return kInfeasible;
  } catch (const MatchingError& e) {
    std::cerr << "matching failed: " << e.what() << '\n';
    return kMatching;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kOther;
  }
  return kOk;
}
