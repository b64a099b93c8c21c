// include/dsrt/synth.h

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

#ifndef DSRT_SYNTH_H_
#define DSRT_SYNTH_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace dsrt {

// A small corpus with known structure: CVC words, per-phone frame means,
// an accent offset of +/- accent_offset*noise_sigma along one random unit
// direction, per-speaker offsets and white noise.  The first
// shared_utterances of every speaker read the same sentences.
struct SynthConfig {
  uint64_t seed = 42;
  std::vector<std::string> accents = {"SouthernEnglish", "Scottish"};
  int speakers_per_accent = 6;  // first half train, second half test
  int utterances_per_speaker = 40;
  int shared_utterances = 24;
  int dim = 16;
  float frame_rate_hz = 50.0f;
  double noise_sigma = 1.0;
  double phone_scale = 4.0;     // per-dimension std of phone means, in sigma
  double accent_offset = 5.0;   // norm of each accent's offset, in sigma
  double speaker_offset = 0.5;  // per-dimension std of speaker offsets, in sigma
  int consonant_frames = 10;    // (onset, coda) pairs; each takes every vowel
  int min_words = 5, max_words = 8;
  // Side inputs for recoverability metrics.
  bool with_metric_inputs = true;
};

// Files written under `dir`:
//   manifest.jsonl, features/<utt>.ftr, align/{words,phones}/<utt>.txt
//   and, with metric inputs: generated.jsonl, copy_synthesis.jsonl,
//   accent_embeddings.jsonl, speaker_embeddings.jsonl, ppg/<utt>.ftr,
//   hypotheses.jsonl
// Generated speech converts every test speaker of accents[1] to every test
// speaker of accents[0].
void WriteSyntheticCorpus(const std::filesystem::path &dir, const SynthConfig &config);

}  // namespace dsrt

#endif  // DSRT_SYNTH_H_
