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

#include "edgeslice/model_graph.hpp"

#include <random>
#include <string>
#include <vector>

#include "doctest.h"
#include "edgeslice/errors.hpp"
#include "support/random_dag.hpp"

namespace edgeslice {
namespace {

const std::string kFixtures = EDGESLICE_FIXTURE_DIR;

std::vector<Layer> layers_named(std::initializer_list<const char*> ids) {
  std::vector<Layer> out;
  for (const char* id : ids) out.push_back({id, 10, 100});
  return out;
}

std::vector<std::string> point_ids(const ModelGraph& g,
                                   const CandidatePoints& c) {
  std::vector<std::string> out;
  for (LayerIndex p : c.points) out.push_back(g.layer(p).id);
  return out;
}

ModelGraph diamond() {
  return ModelGraph::build(layers_named({"a", "b", "c", "d"}),
                           {{"a", "b"}, {"a", "c"}, {"b", "d"}, {"c", "d"}});
}

TEST_CASE("build rejects malformed graphs") {
  using V = std::vector<LayerEdge>;
  CHECK_THROWS_AS(ModelGraph::build({}, {}), ValidationError);
  CHECK_THROWS_WITH_AS(ModelGraph::build(layers_named({"a", "a"}), {}),
                       doctest::Contains("duplicate layer id 'a'"),
                       ValidationError);
  CHECK_THROWS_WITH_AS(
      ModelGraph::build({{"a", 0, 1}}, {}),
      doctest::Contains("output_elements"), ValidationError);
  CHECK_THROWS_WITH_AS(
      ModelGraph::build(layers_named({"a", "b"}), V{{"a", "zz"}}),
      doctest::Contains("unknown layer 'zz'"), ValidationError);
  CHECK_THROWS_WITH_AS(
      ModelGraph::build(layers_named({"a", "b"}), V{{"a", "b"}, {"b", "b"}}),
      doctest::Contains("cycle"), ValidationError);
  CHECK_THROWS_WITH_AS(
      ModelGraph::build(layers_named({"s", "a", "b", "t"}),
                        V{{"s", "a"}, {"a", "b"}, {"b", "a"}, {"b", "t"}}),
      doctest::Contains("cycle through layer"), ValidationError);
  CHECK_THROWS_WITH_AS(
      ModelGraph::build(layers_named({"a", "b", "c"}), V{{"a", "c"}, {"b", "c"}}),
      doctest::Contains("exactly one source"), ValidationError);
  CHECK_THROWS_WITH_AS(
      ModelGraph::build(layers_named({"a", "b", "c"}), V{{"a", "b"}, {"a", "c"}}),
      doctest::Contains("exactly one sink"), ValidationError);
}

TEST_CASE("duplicate edges collapse") {
  const ModelGraph g = ModelGraph::build(layers_named({"a", "b"}),
                                         {{"a", "b"}, {"a", "b"}});
  CHECK(g.edge_count() == 1);
  CHECK(g.successors(0).size() == 1);
}

TEST_CASE("single layer is both source and sink") {
  const ModelGraph g = ModelGraph::build(layers_named({"only"}), {});
  CHECK(g.source() == g.sink());
  const CandidatePoints c = candidate_partition_points(g);
  CHECK(c.size() == 1);
  CHECK_FALSE(c.partitionable(g));
}

TEST_CASE("topological order respects edges") {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 50; ++t) {
    const ModelGraph g = testing::random_dag(12, 0.3, rng);
    std::vector<std::size_t> pos(g.size());
    const auto& order = g.topological_order();
    REQUIRE(order.size() == g.size());
    for (std::size_t i = 0; i < order.size(); ++i) pos[order[i]] = i;
    for (LayerIndex v = 0; v < g.size(); ++v) {
      for (LayerIndex w : g.successors(v)) CHECK(pos[v] < pos[w]);
    }
  }
}

TEST_CASE("parse errors and round trip") {
  CHECK_THROWS_AS(parse_model_graph("{not json"), ParseError);
  CHECK_THROWS_AS(parse_model_graph(R"({"format":"other/1","layers":[],"edges":[]})"),
                  ParseError);
  CHECK_THROWS_AS(parse_model_graph(R"({"format":"edgeslice-model/1","layers":[{"id":"a"}],"edges":[]})"),
                  ParseError);
  CHECK_THROWS_AS(load_model_graph(kFixtures + "/missing.json"), ParseError);
  // Structural errors are not parse errors.
  CHECK_THROWS_AS(
      parse_model_graph(R"({"format":"edgeslice-model/1","layers":[],"edges":[]})"),
      ValidationError);

  const ModelGraph g = diamond();
  const ModelGraph back = parse_model_graph(dump_model_graph(g));
  REQUIRE(back.size() == g.size());
  CHECK(back.edge_count() == g.edge_count());
  for (LayerIndex i = 0; i < g.size(); ++i) {
    CHECK(back.layer(i).id == g.layer(i).id);
    CHECK(back.layer(i).output_elements == g.layer(i).output_elements);
    CHECK(back.layer(i).memory_bytes == g.layer(i).memory_bytes);
  }
  CHECK(dump_model_graph(back) == dump_model_graph(g));
}

TEST_CASE("longest path depths agree with path enumeration") {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 200; ++t) {
    const ModelGraph g = testing::random_dag(3 + t % 10, 0.35, rng);
    CHECK(longest_path_depths(g) == testing::brute_force_depths(g));
  }
}

TEST_CASE("all_paths_through agrees with path enumeration") {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 150; ++t) {
    const ModelGraph g = testing::random_dag(3 + t % 9, 0.4, rng);
    const std::vector<int> depths = longest_path_depths(g);
    for (LayerIndex from = 0; from < g.size(); ++from) {
      const auto paths = testing::paths_to_sink(g, from);
      for (LayerIndex to = 0; to < g.size(); ++to) {
        if (to == from || depths[to] <= depths[from]) continue;
        bool expected = true;
        for (const auto& p : paths) {
          expected &= std::find(p.begin(), p.end(), to) != p.end();
        }
        CHECK(all_paths_through(g, depths, from, to) == expected);
      }
    }
  }
}

TEST_CASE("candidate points on small shapes") {
  SUBCASE("chain yields every layer") {
    const ModelGraph g = ModelGraph::build(layers_named({"a", "b", "c", "d"}),
                                           {{"a", "b"}, {"b", "c"}, {"c", "d"}});
    const CandidatePoints c = candidate_partition_points(g);
    CHECK(point_ids(g, c) == std::vector<std::string>{"a", "b", "c", "d"});
    CHECK(c.partitionable(g));
  }
  SUBCASE("diamond yields its endpoints") {
    const ModelGraph g = diamond();
    const CandidatePoints c = candidate_partition_points(g);
    CHECK(point_ids(g, c) == std::vector<std::string>{"a", "d"});
    CHECK_FALSE(c.partitionable(g));
  }
  SUBCASE("skip edge hides the bypassed layer") {
    // a -> b -> c -> d with a shortcut a -> c: b has a unique depth but
    // the shortcut avoids it.
    const ModelGraph g = ModelGraph::build(
        layers_named({"a", "b", "c", "d"}),
        {{"a", "b"}, {"b", "c"}, {"a", "c"}, {"c", "d"}});
    const CandidatePoints c = candidate_partition_points(g);
    CHECK(point_ids(g, c) == std::vector<std::string>{"a", "c", "d"});
  }
}

TEST_CASE("candidate points agree with the definition on random DAGs") {
  std::mt19937_64 rng(17);
  for (int t = 0; t < 300; ++t) {
    const ModelGraph g = testing::random_dag(2 + t % 12, 0.25 + 0.05 * (t % 5), rng);
    const CandidatePoints c = candidate_partition_points(g);
    CHECK(c.points == testing::brute_force_candidates(g));
    for (std::size_t k = 1; k < c.size(); ++k) {
      CHECK(c.depth_of_point(k - 1) < c.depth_of_point(k));
    }
  }
}

TEST_CASE("bundled fixtures") {
  SUBCASE("chain") {
    const ModelGraph g = load_model_graph(kFixtures + "/chain.json");
    CHECK(candidate_partition_points(g).size() == g.size());
  }
  SUBCASE("diamond") {
    const ModelGraph g = load_model_graph(kFixtures + "/diamond.json");
    const CandidatePoints c = candidate_partition_points(g);
    CHECK(c.points == std::vector<LayerIndex>{g.source(), g.sink()});
  }
  SUBCASE("nasnet-like has no split point") {
    const ModelGraph g = load_model_graph(kFixtures + "/nasnet_like.json");
    const CandidatePoints c = candidate_partition_points(g);
    CHECK(c.points == std::vector<LayerIndex>{g.source(), g.sink()});
    CHECK_FALSE(c.partitionable(g));
  }
  SUBCASE("inception-resnet-like has many split points") {
    const ModelGraph g =
        load_model_graph(kFixtures + "/inception_resnet_v2_like.json");
    CHECK(candidate_partition_points(g).size() >= 25);
  }
  SUBCASE("resnet-like cuts at block outputs only") {
    const ModelGraph g = load_model_graph(kFixtures + "/resnet50_like.json");
    const CandidatePoints c = candidate_partition_points(g);
    for (LayerIndex p : c.points) {
      const std::string& id = g.layer(p).id;
      const bool block_output = id.ends_with("_add");
      const bool stem = id == "input" || id == "conv1" || id == "pool1" ||
                        id == "avg_pool" || id == "fc1000";
      const bool accepted = block_output || stem;
      CHECK_MESSAGE(accepted, id);
    }
    // Sixteen bottleneck blocks plus input, conv1, pool1, avg_pool, fc1000.
    CHECK(c.size() == 21);
  }
}

}  // namespace
}  // namespace edgeslice
