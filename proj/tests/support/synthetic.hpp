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

// Random DNN-shaped layer graphs for property and oracle tests.

#ifndef EDGESLICE_TESTS_SUPPORT_SYNTHETIC_HPP_
#define EDGESLICE_TESTS_SUPPORT_SYNTHETIC_HPP_

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "edgeslice/model_graph.hpp"

namespace edgeslice::testing {

struct SyntheticSpec {
  // Blocks after the input layer. Each block ends in one cut vertex.
  std::size_t blocks = 8;
  std::int64_t input_elements = 150000;
  // Block outputs are drawn from [min_fraction, max_fraction] * input.
  double min_fraction = 0.05;
  double max_fraction = 0.9;
  std::int64_t min_block_memory = 4 << 20;
  std::int64_t max_block_memory = 24 << 20;
  // Probability that a block is a two-branch diamond instead of one layer.
  double diamond_probability = 0.4;
};

// The input is the largest tensor; every block output is a candidate point,
// diamond interiors never are.
inline ModelGraph synthetic_model(const SyntheticSpec& spec,
                                  std::mt19937_64& rng) {
  std::uniform_real_distribution<double> frac(spec.min_fraction,
                                              spec.max_fraction);
  std::uniform_int_distribution<std::int64_t> mem(spec.min_block_memory,
                                                  spec.max_block_memory);
  std::bernoulli_distribution diamond(spec.diamond_probability);
  std::vector<Layer> layers;
  std::vector<LayerEdge> edges;
  layers.push_back({"in", spec.input_elements, spec.input_elements * 4});
  std::string prev = "in";
  auto elems = [&] {
    return std::max<std::int64_t>(
        1, static_cast<std::int64_t>(frac(rng) *
                                     static_cast<double>(spec.input_elements)));
  };
  for (std::size_t b = 0; b < spec.blocks; ++b) {
    const std::string out = "b" + std::to_string(b);
    const std::int64_t memory = mem(rng);
    if (diamond(rng)) {
      const std::string l = out + "l", r = out + "r";
      layers.push_back({l, elems(), memory / 3});
      layers.push_back({r, elems(), memory / 3});
      layers.push_back({out, elems(), memory - 2 * (memory / 3)});
      edges.push_back({prev, l});
      edges.push_back({prev, r});
      edges.push_back({l, out});
      edges.push_back({r, out});
    } else {
      layers.push_back({out, elems(), memory});
      edges.push_back({prev, out});
    }
    prev = out;
  }
  return ModelGraph::build(std::move(layers), edges);
}

}  // namespace edgeslice::testing

#endif  // EDGESLICE_TESTS_SUPPORT_SYNTHETIC_HPP_
