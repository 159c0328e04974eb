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

#ifndef EDGESLICE_MODEL_GRAPH_HPP_
#define EDGESLICE_MODEL_GRAPH_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace edgeslice {

inline constexpr std::string_view kModelFormat = "edgeslice-model/1";

using LayerIndex = std::size_t;

struct Layer {
  std::string id;
  // Element count of the layer's output tensor at batch size 1.
  std::int64_t output_elements = 0;
  // Resident footprint (weights + activations) in bytes.
  std::int64_t memory_bytes = 0;
};

struct LayerEdge {
  std::string from;
  std::string to;
};

// Validated single-source, single-sink layer DAG. Layers are addressed by
// their position in the input list; ids are kept for reporting.
class ModelGraph {
 public:
  // Validates and builds the graph. Throws ValidationError naming the
  // offending element when the input is not a connected single-sink DAG.
  static ModelGraph build(std::vector<Layer> layers,
                          const std::vector<LayerEdge>& edges);

  std::size_t size() const { return layers_.size(); }
  const Layer& layer(LayerIndex i) const { return layers_[i]; }
  const std::vector<Layer>& layers() const { return layers_; }
  const std::vector<LayerIndex>& successors(LayerIndex i) const {
    return successors_[i];
  }
  const std::vector<LayerIndex>& predecessors(LayerIndex i) const {
    return predecessors_[i];
  }
  LayerIndex source() const { return source_; }
  LayerIndex sink() const { return sink_; }
  std::size_t edge_count() const { return edge_count_; }

  // Kahn order; ties resolved by layer index so the order is reproducible.
  const std::vector<LayerIndex>& topological_order() const { return topo_; }

  // Throws ValidationError for an unknown id.
  LayerIndex index_of(std::string_view id) const;

 private:
  ModelGraph() = default;

  std::vector<Layer> layers_;
  std::vector<std::vector<LayerIndex>> successors_;
  std::vector<std::vector<LayerIndex>> predecessors_;
  std::unordered_map<std::string, LayerIndex> index_;
  std::vector<LayerIndex> topo_;
  LayerIndex source_ = 0;
  LayerIndex sink_ = 0;
  std::size_t edge_count_ = 0;
};

// Reads an "edgeslice-model/1" document. Throws ParseError on malformed
// content and ValidationError on structural violations.
ModelGraph load_model_graph(const std::filesystem::path& path);
ModelGraph parse_model_graph(std::string_view text);
std::string dump_model_graph(const ModelGraph& g);

// Longest-path edge count from the source, indexed by LayerIndex.
std::vector<int> longest_path_depths(const ModelGraph& g);

// True iff every directed path leaving `from` reaches `to` before any layer
// deeper than `to`.
bool all_paths_through(const ModelGraph& g, const std::vector<int>& depths,
                       LayerIndex from, LayerIndex to);

struct CandidatePoints {
  // p_0 = source, strictly increasing depth.
  std::vector<LayerIndex> points;
  std::vector<int> depths;

  std::size_t size() const { return points.size(); }
  int depth_of_point(std::size_t k) const { return depths[points[k]]; }
  // A model can be split only if some candidate lies strictly between the
  // source and the sink.
  bool partitionable(const ModelGraph& g) const;
};

CandidatePoints candidate_partition_points(const ModelGraph& g);

}  // namespace edgeslice

#endif  // EDGESLICE_MODEL_GRAPH_HPP_
