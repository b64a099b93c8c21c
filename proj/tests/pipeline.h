// tests/pipeline.h

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

#ifndef DSRT_TESTS_PIPELINE_H_
#define DSRT_TESTS_PIPELINE_H_

#include <filesystem>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "dsrt/cli.h"
#include "dsrt/io-util.h"

namespace dsrt {
namespace testing {

inline int Cli(std::vector<std::string> args) {
  args.insert(args.begin(), "dsrt-eval");
  std::vector<const char *> argv;
  for (const auto &a : args) argv.push_back(a.c_str());
  return RunDsrtEval(static_cast<int>(argv.size()), argv.data());
}

// validate-manifest, train-codebook, quantize, abx, metrics and plotdata on
// a corpus written by WriteSyntheticCorpus.  Returns the first non-zero exit
// code and the failing step, or 0.
inline int RunPipeline(const std::filesystem::path &corpus, const std::filesystem::path &out,
                       std::string *failed_step, int codebook_size = 16) {
  std::string m = (corpus / "manifest.jsonl").string(), o = out.string();
  std::vector<std::string> common{"--manifest", m, "--output-dir", o, "--workers", "2"};
  auto with = [&](std::vector<std::string> tail) {
    std::vector<std::string> a = common;
    a.insert(a.end(), tail.begin(), tail.end());
    return a;
  };
  std::string k = std::to_string(codebook_size);
  std::vector<std::pair<std::string, std::vector<std::string>>> steps{
      {"validate-manifest", with({"validate-manifest", "--check-files"})},
      {"train-codebook", with({"train-codebook", "-K", k, "--epochs", "10"})},
      {"quantize", with({"quantize", "--split", "all"})},
      {"abx", with({"abx", "--representation", "tokens", "--p-percent", "20"})},
      {"metrics",
       with({"metrics", "--generated", (corpus / "generated.jsonl").string(), "--copy-synthesis",
             (corpus / "copy_synthesis.jsonl").string(), "--accent-embeddings",
             (corpus / "accent_embeddings.jsonl").string(), "--speaker-embeddings",
             (corpus / "speaker_embeddings.jsonl").string(), "--ppg-dir", (corpus / "ppg").string(),
             "--hypotheses", (corpus / "hypotheses.jsonl").string()})},
      {"plotdata", with({"plotdata", (out / "abx-accent.json").string()})},
  };
  for (const auto &[name, args] : steps) {
    int code = Cli(args);
    if (code != 0) {
      if (failed_step) *failed_step = name;
      return code;
    }
  }
  return 0;
}

// Relative path -> file bytes for every regular file under `root`.
inline std::map<std::string, std::vector<unsigned char>> Snapshot(const std::filesystem::path &root) {
  std::map<std::string, std::vector<unsigned char>> out;
  for (const auto &e : std::filesystem::recursive_directory_iterator(root))
    if (e.is_regular_file())
      out[std::filesystem::relative(e.path(), root).string()] = ReadFileBytes(e.path());
  return out;
}

inline size_t Digest(const std::vector<unsigned char> &bytes) {
  return std::hash<std::string>{}(std::string(bytes.begin(), bytes.end()));
}

}  // namespace testing
}  // namespace dsrt

#endif  // DSRT_TESTS_PIPELINE_H_
