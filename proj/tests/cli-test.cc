// tests/cli-test.cc

// Copyright 2026  The dsrt-eval Authors

// See ../../COPYING for clarification regarding multiple authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include <doctest.h>

#include <cstdlib>

#include <json.hpp>

#include "dsrt/io-util.h"
#include "dsrt/synth.h"
#include "pipeline.h"
#include "test-util.h"

namespace dsrt {
namespace {

using nlohmann::json;
using testing::Cli;
using testing::TempDir;

struct Corpus {
  TempDir dir{"cli"};
  std::filesystem::path corpus = dir / "corpus";
  std::string manifest = (corpus / "manifest.jsonl").string();
  Corpus() {
    SynthConfig cfg;
    cfg.speakers_per_accent = 4;
    cfg.utterances_per_speaker = 40;
    WriteSyntheticCorpus(corpus, cfg);
  }
};

json ReadJson(const std::filesystem::path &p) { return json::parse(testing::ReadText(p)); }

TEST_CASE("pipeline runs and reruns byte-identically") {
  Corpus c;
  std::string step;
  REQUIRE(testing::RunPipeline(c.corpus, c.dir / "out1", &step) == 0);
  REQUIRE(testing::RunPipeline(c.corpus, c.dir / "out2", &step) == 0);
  auto a = testing::Snapshot(c.dir / "out1"), b = testing::Snapshot(c.dir / "out2");
  CHECK(a.size() >= 9);
  CHECK(a == b);
  for (const char *f : {"manifest-check.json", "codebook.vqcb", "train-log.json", "tokens.jsonl",
                        "abx-accent.json", "abx-accent.csv", "combinations.csv", "metrics.json",
                        "metrics-summary.csv", "plotdata.csv"})
    CHECK_MESSAGE(a.count(f), f);

  json abx = ReadJson(c.dir / "out1" / "abx-accent.json");
  CHECK(abx["schema"] == "dsrt.abx/1");
  CHECK(abx["config"]["codebook_size"] == 16);
  json metrics = ReadJson(c.dir / "out1" / "metrics.json");
  CHECK(metrics["schema"] == "dsrt.metrics/1");
  for (const auto &col : metrics["columns"]) CHECK(metrics["summary"][col.get<std::string>()].is_number());
  CHECK(ReadJson(c.dir / "out1" / "train-log.json")["schema"] == "dsrt.train-log/1");
}

TEST_CASE("exit codes") {
  Corpus c;
  std::string out = (c.dir / "out").string();
  CHECK(Cli({"--help"}) == 0);
  CHECK(Cli({"--bogus"}) == 1);
  CHECK(Cli({}) == 1);
  CHECK(Cli({"--manifest", c.manifest, "--output-dir", out, "train-codebook", "-K", "1"}) == 1);
  CHECK(Cli({"--manifest", c.manifest, "--output-dir", out, "abx", "--condition", "word"}) == 1);
  CHECK(Cli({"--manifest", (c.dir / "none.jsonl").string(), "--output-dir", out,
             "validate-manifest"}) == 2);
  CHECK(Cli({"--output-dir", out, "validate-manifest"}) == 1);
  CHECK(Cli({"--config", (c.dir / "none.json").string(), "validate-manifest"}) == 1);
  CHECK(Cli({"--manifest", c.manifest, "--output-dir", out, "quantize"}) == 2);
}

TEST_CASE("speaker and phone conditions") {
  Corpus c;
  std::string out = (c.dir / "out").string();
  for (const char *cond : {"speaker", "phone"}) {
    CHECK(Cli({"--manifest", c.manifest, "--output-dir", out, "--workers", "1", "abx",
               "--condition", cond}) == 0);
    json r = ReadJson(c.dir / "out" / (std::string("abx-") + cond + ".json"));
    CHECK(r["condition"] == cond);
    CHECK(r["cells"].size() > 0);
  }
}

TEST_CASE("config file, environment and flags in that order") {
  Corpus c;
  WriteTextFile(c.dir / "cfg.json", json{{"paths", {{"manifest", c.manifest},
                                                    {"output_dir", (c.dir / "from-config").string()}}}}
                                        .dump());
  std::string cfg = (c.dir / "cfg.json").string();
  CHECK(Cli({"--config", cfg, "validate-manifest"}) == 0);
  CHECK(std::filesystem::exists(c.dir / "from-config" / "manifest-check.json"));

  ::setenv("DSRT_OUTPUT_DIR", (c.dir / "from-env").string().c_str(), 1);
  CHECK(Cli({"--config", cfg, "validate-manifest"}) == 0);
  CHECK(std::filesystem::exists(c.dir / "from-env" / "manifest-check.json"));
  CHECK(Cli({"--config", cfg, "--output-dir", (c.dir / "from-flag").string(),
             "validate-manifest"}) == 0);
  CHECK(std::filesystem::exists(c.dir / "from-flag" / "manifest-check.json"));
  ::unsetenv("DSRT_OUTPUT_DIR");
}

TEST_CASE("plotdata") {
  Corpus c;
  std::string out = (c.dir / "out").string();
  std::vector<std::string> base{"--manifest", c.manifest, "--output-dir", out, "--workers", "1"};
  auto run = [&](std::vector<std::string> tail) {
    auto a = base;
    a.insert(a.end(), tail.begin(), tail.end());
    return Cli(a);
  };
  REQUIRE(run({"--label", "continuous", "abx"}) == 0);
  std::filesystem::rename(c.dir / "out" / "abx-accent.json", c.dir / "a.json");
  REQUIRE(run({"train-codebook", "-K", "8", "--epochs", "3"}) == 0);
  REQUIRE(run({"--label", "k8", "abx", "--representation", "tokens"}) == 0);
  std::string a = (c.dir / "a.json").string(), b = (c.dir / "out" / "abx-accent.json").string();
  CHECK(run({"plotdata", a, b, "-o", (c.dir / "p.csv").string()}) == 0);
  std::string csv = testing::ReadText(c.dir / "p.csv");
  CHECK(csv.find("abx_error") != std::string::npos);
  CHECK(csv.find("k8") != std::string::npos);
  CHECK(run({"plotdata", a, a}) == 1);
  CHECK(run({"plotdata", a, (c.dir / "out" / "train-log.json").string()}) == 1);
}

}  // namespace
}  // namespace dsrt
