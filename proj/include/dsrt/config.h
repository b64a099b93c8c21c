// include/dsrt/config.h

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

#ifndef DSRT_CONFIG_H_
#define DSRT_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <string>

namespace dsrt {

// Everything a pipeline run depends on.  Read from a JSON file whose keys
// mirror the fields below; unknown keys are rejected.  Empty path strings
// mean "not given".
struct RunConfig {
  uint64_t seed = 42;
  int workers = 0;  // 0 = all cores
  std::string label;  // free-form tag copied into report config blocks

  struct Paths {
    std::string manifest;
    std::string feature_root;
    std::string output_dir = "dsrt-out";
    std::string codebook;
  } paths;

  struct Quantizer {
    size_t codebook_size = 1024;
    double decay = 0.99;
    double epsilon = 1e-5;
    size_t max_frames = 2000000;
    int epochs = 50;
    double early_stop_tol = 1e-6;
  } quantizer;

  struct Abx {
    std::string condition = "accent";         // accent | speaker | phone
    std::string representation = "continuous";  // continuous | tokens
    std::string token_embedding = "centroid";  // centroid | one_hot
    size_t top_n_words = 100;
    double p_percent = 10.0;
    size_t max_per_cell = 500;
    int64_t min_utterance_index = 24;
    std::string selector_features;  // directory of <utt_id>.ftr; default: manifest features
    std::string combinations;       // reuse a saved combination list
  } abx;

  struct Metrics {
    double js_base = 2.0;
    std::string wer_pooling = "tokens";  // tokens | utterances
    std::string generated;
    std::string copy_synthesis;
    std::string accent_embeddings;
    std::string speaker_embeddings;
    std::string ppg_dir;
    std::string hypotheses;
    int64_t shared_text_utterances = 24;
    size_t wer_per_speaker = 24;
  } metrics;
};

// Throws ConfigError on malformed JSON, unknown keys, wrong types or
// out-of-range values.
RunConfig ParseRunConfig(const std::string &json_text);
RunConfig LoadRunConfig(const std::filesystem::path &path);
std::string SerializeRunConfig(const RunConfig &config);
void ValidateRunConfig(const RunConfig &config);

// DSRT_OUTPUT_DIR and DSRT_WORKERS override the corresponding fields.
void ApplyEnvironment(RunConfig *config);

}  // namespace dsrt

#endif  // DSRT_CONFIG_H_
