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

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "json.hpp"

namespace {

namespace fs = std::filesystem;

const std::string kCli = EDGESLICE_CLI;
const fs::path kFixtures = EDGESLICE_FIXTURE_DIR;

// Fresh scratch directory per test case.
class Scratch {
 public:
  explicit Scratch(const std::string& name)
      : dir_(fs::temp_directory_path() / ("edgeslice_cli_" + name)) {
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  ~Scratch() { fs::remove_all(dir_); }
  fs::path operator/(const std::string& f) const { return dir_ / f; }

 private:
  fs::path dir_;
};

int run(const std::string& args) {
  const std::string cmd = kCli + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string fixture(const std::string& name) {
  return (kFixtures / name).string();
}

TEST_CASE("exit codes") {
  Scratch s("codes");
  CHECK(run("") == 2);
  CHECK(run("bogus") == 2);
  CHECK(run("partition") == 2);
  CHECK(run("partition --model " + fixture("missing.json")) == 2);
  CHECK(run("partition --model " + fixture("inception_resnet_v2_like.json") +
            " --capacity-mb 1") == 3);
  CHECK(run("partition --model " + fixture("resnet50_like.json") +
            " --capacity-mb 64 --out " + (s / "s.json").string()) == 0);
  CHECK(run("place --scheme " + (s / "s.json").string() + " --nodes 3") == 3);
  CHECK(run("place --scheme " + (s / "s.json").string() + " --nodes 20") == 0);
  CHECK(run("graph --shape star") == 2);
  CHECK(run("sweep --config " + fixture("missing.json")) == 2);
}

TEST_CASE("partition, graph and place chain together") {
  Scratch s("chain");
  const std::string scheme = (s / "scheme.json").string();
  const std::string comm = (s / "comm.json").string();
  const std::string report = (s / "report.json").string();
  REQUIRE(run("partition --model " + fixture("resnet50_like.json") +
              " --capacity-mb 128 --classes 3 --out " + scheme) == 0);
  REQUIRE(run("graph --nodes 12 --seed 4 --out " + comm) == 0);
  REQUIRE(run("place --scheme " + scheme + " --comm " + comm + " --out " + report) == 0);
  const auto doc = nlohmann::json::parse(slurp(report));
  CHECK(doc["format"] == "edgeslice-placement/1");
  CHECK(doc["beta_s"].get<double>() >= doc["bound_s"].get<double>());
  CHECK(doc["nodes"].size() == doc["hops"].size() + 1);

  const std::string again = (s / "again.json").string();
  REQUIRE(run("place --scheme " + scheme + " --comm " + comm + " --out " + again) == 0);
  CHECK(slurp(report) == slurp(again));
}

TEST_CASE("sweep output is byte-identical across runs") {
  Scratch s("sweep");
  const std::string config = (s / "config.json").string();
  {
    std::ofstream out(config);
    out << R"({"format":"edgeslice-config/1","models":[")" << fixture("resnet50_like.json")
        << R"(","nasnet_like.json"],"node_counts":[5,20],"class_counts":[2,5],)"
        << R"("capacities_mb":[64,256],"trials":2,"seed":9})";
  }
  // Relative model paths resolve against the config's directory.
  fs::copy_file(kFixtures / "nasnet_like.json", s / "nasnet_like.json");
  REQUIRE(run("sweep --config " + config + " --out-dir " + (s / "a").string()) == 0);
  REQUIRE(run("sweep --config " + config + " --out-dir " + (s / "b").string() +
              " --threads 2") == 0);
  for (const char* f : {"sweep.csv", "aggregate.csv", "ratios.csv"}) {
    const std::string a = slurp(s / "a" / f);
    CHECK_FALSE(a.empty());
    CHECK(a == slurp(s / "b" / f));
  }
  REQUIRE(run("sweep --config " + config + " --out-dir " + (s / "c").string() +
              " --seed 10") == 0);
  CHECK(slurp(s / "a" / "sweep.csv") != slurp(s / "c" / "sweep.csv"));
}

TEST_CASE("shapes, stats and oracle") {
  Scratch s("misc");
  REQUIRE(run("shapes --model " + fixture("resnet50_like.json") +
              " --nodes 5,9 --out " + (s / "a.csv").string()) == 0);
  REQUIRE(run("shapes --model " + fixture("resnet50_like.json") +
              " --nodes 5,9 --out " + (s / "b.csv").string()) == 0);
  CHECK(slurp(s / "a.csv") == slurp(s / "b.csv"));
  CHECK(slurp(s / "a.csv").starts_with("# edgeslice-shapes/1\n"));

  REQUIRE(run("stats --out " + (s / "stats.json").string()) == 0);
  const auto stats = nlohmann::json::parse(slurp(s / "stats.json"));
  CHECK(stats["mean_mbps"].get<double>() == doctest::Approx(4.766).epsilon(0.01));

  REQUIRE(run("oracle --model " + fixture("chain.json") + " --nodes 4 --out " +
              (s / "o.json").string()) == 0);
  CHECK(nlohmann::json::parse(slurp(s / "o.json"))["format"] ==
        "edgeslice-placement/1");
  // Too many candidate points for exhaustive search.
  CHECK(run("oracle --model " + fixture("inception_resnet_v2_like.json") +
            " --nodes 4") != 0);
}

}  // namespace
