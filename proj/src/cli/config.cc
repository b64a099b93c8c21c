// src/cli/config.cc

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

#include "dsrt/config.h"

#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "dsrt/error.h"

namespace dsrt {

using nlohmann::json;

namespace {

// Reads or writes one JSON object against a struct, field by field.
class Binder {
 public:
  Binder(json *obj, bool reading, std::string where)
      : obj_(obj), reading_(reading), where_(std::move(where)) {
    if (reading_ && !obj_->is_object()) throw ConfigError(where_ + " must be an object");
  }

  template <typename T>
  void Field(const char *name, T *value) {
    known_.insert(name);
    if (!reading_) {
      (*obj_)[name] = *value;
      return;
    }
    if (!obj_->contains(name)) return;
    const json &v = (*obj_)[name];
    std::string path = where_ + "." + name;
    if constexpr (std::is_same_v<T, std::string>) {
      if (!v.is_string()) throw ConfigError(path + " must be a string");
    } else if constexpr (std::is_floating_point_v<T>) {
      if (!v.is_number()) throw ConfigError(path + " must be a number");
    } else if constexpr (std::is_unsigned_v<T>) {
      if (!v.is_number_unsigned()) throw ConfigError(path + " must be a non-negative integer");
    } else {
      if (!v.is_number_integer()) throw ConfigError(path + " must be an integer");
    }
    try {
      *value = v.get<T>();
    } catch (const json::exception &) {
      throw ConfigError(path + " is out of range");
    }
  }

  json *Child(const char *name) {
    known_.insert(name);
    if (!reading_) {
      (*obj_)[name] = json::object();
    } else if (!obj_->contains(name)) {
      (*obj_)[name] = json::object();
    }
    return &(*obj_)[name];
  }

  void Finish() const {
    if (!reading_) return;
    for (const auto &[key, value] : obj_->items())
      if (!known_.count(key)) throw ConfigError("unknown config key " + where_ + "." + key);
  }

 private:
  json *obj_;
  bool reading_;
  std::string where_;
  std::set<std::string> known_;
};

void Bind(json *root, RunConfig *c, bool reading) {
  Binder top(root, reading, "config");
  top.Field("seed", &c->seed);
  top.Field("workers", &c->workers);
  top.Field("label", &c->label);

  Binder paths(top.Child("paths"), reading, "config.paths");
  paths.Field("manifest", &c->paths.manifest);
  paths.Field("feature_root", &c->paths.feature_root);
  paths.Field("output_dir", &c->paths.output_dir);
  paths.Field("codebook", &c->paths.codebook);
  paths.Finish();

  Binder q(top.Child("quantizer"), reading, "config.quantizer");
  q.Field("codebook_size", &c->quantizer.codebook_size);
  q.Field("decay", &c->quantizer.decay);
  q.Field("epsilon", &c->quantizer.epsilon);
  q.Field("max_frames", &c->quantizer.max_frames);
  q.Field("epochs", &c->quantizer.epochs);
  q.Field("early_stop_tol", &c->quantizer.early_stop_tol);
  q.Finish();

  Binder a(top.Child("abx"), reading, "config.abx");
  a.Field("condition", &c->abx.condition);
  a.Field("representation", &c->abx.representation);
  a.Field("token_embedding", &c->abx.token_embedding);
  a.Field("top_n_words", &c->abx.top_n_words);
  a.Field("p_percent", &c->abx.p_percent);
  a.Field("max_per_cell", &c->abx.max_per_cell);
  a.Field("min_utterance_index", &c->abx.min_utterance_index);
  a.Field("selector_features", &c->abx.selector_features);
  a.Field("combinations", &c->abx.combinations);
  a.Finish();

  Binder m(top.Child("metrics"), reading, "config.metrics");
  m.Field("js_base", &c->metrics.js_base);
  m.Field("wer_pooling", &c->metrics.wer_pooling);
  m.Field("generated", &c->metrics.generated);
  m.Field("copy_synthesis", &c->metrics.copy_synthesis);
  m.Field("accent_embeddings", &c->metrics.accent_embeddings);
  m.Field("speaker_embeddings", &c->metrics.speaker_embeddings);
  m.Field("ppg_dir", &c->metrics.ppg_dir);
  m.Field("hypotheses", &c->metrics.hypotheses);
  m.Field("shared_text_utterances", &c->metrics.shared_text_utterances);
  m.Field("wer_per_speaker", &c->metrics.wer_per_speaker);
  m.Finish();

  top.Finish();
}

void Require(bool ok, const std::string &what) {
  if (!ok) throw ConfigError("config: " + what);
}

}  // namespace

void ValidateRunConfig(const RunConfig &c) {
  Require(c.workers >= 0, "workers must be >= 0");
  Require(c.quantizer.codebook_size >= 2 && c.quantizer.codebook_size <= 65536,
          "quantizer.codebook_size must be in [2, 65536]");
  Require(c.quantizer.decay > 0.0 && c.quantizer.decay < 1.0, "quantizer.decay must be in (0, 1)");
  Require(c.quantizer.epsilon > 0.0, "quantizer.epsilon must be > 0");
  Require(c.quantizer.max_frames >= 1, "quantizer.max_frames must be >= 1");
  Require(c.quantizer.epochs >= 1, "quantizer.epochs must be >= 1");
  Require(c.quantizer.early_stop_tol >= 0.0, "quantizer.early_stop_tol must be >= 0");
  Require(c.abx.condition == "accent" || c.abx.condition == "speaker" ||
              c.abx.condition == "phone",
          "abx.condition must be accent, speaker or phone");
  Require(c.abx.representation == "continuous" || c.abx.representation == "tokens",
          "abx.representation must be continuous or tokens");
  Require(c.abx.token_embedding == "centroid" || c.abx.token_embedding == "one_hot",
          "abx.token_embedding must be centroid or one_hot");
  Require(c.abx.top_n_words >= 1, "abx.top_n_words must be >= 1");
  Require(c.abx.p_percent > 0.0 && c.abx.p_percent <= 100.0, "abx.p_percent must be in (0, 100]");
  Require(c.abx.max_per_cell >= 1, "abx.max_per_cell must be >= 1");
  Require(c.abx.min_utterance_index >= 0, "abx.min_utterance_index must be >= 0");
  Require(c.metrics.js_base > 0.0 && c.metrics.js_base != 1.0,
          "metrics.js_base must be > 0 and != 1");
  Require(c.metrics.wer_pooling == "tokens" || c.metrics.wer_pooling == "utterances",
          "metrics.wer_pooling must be tokens or utterances");
  Require(c.metrics.shared_text_utterances >= 1, "metrics.shared_text_utterances must be >= 1");
  Require(c.metrics.wer_per_speaker >= 1, "metrics.wer_per_speaker must be >= 1");
}

RunConfig ParseRunConfig(const std::string &json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error &e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  RunConfig c;
  Bind(&root, &c, true);
  ValidateRunConfig(c);
  return c;
}

RunConfig LoadRunConfig(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ParseRunConfig(ss.str());
}

std::string SerializeRunConfig(const RunConfig &config) {
  json root = json::object();
  RunConfig copy = config;
  Bind(&root, &copy, false);
  return root.dump(2) + "\n";
}

void ApplyEnvironment(RunConfig *config) {
  if (const char *dir = std::getenv("DSRT_OUTPUT_DIR"); dir && *dir) config->paths.output_dir = dir;
  if (const char *w = std::getenv("DSRT_WORKERS"); w && *w) {
    char *end = nullptr;
    long v = std::strtol(w, &end, 10);
    if (*end != '\0' || v < 0 || v > 4096)
      throw ConfigError("DSRT_WORKERS must be a non-negative integer, got '" + std::string(w) + "'");
    config->workers = static_cast<int>(v);
  }
}

}  // namespace dsrt
