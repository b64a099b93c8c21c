// include/dsrt/recoverability.h

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

#ifndef DSRT_RECOVERABILITY_H_
#define DSRT_RECOVERABILITY_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dsrt/corpus.h"

namespace dsrt {

// u.v / (|u| |v|).  Throws DataError on a zero vector or size mismatch.
double CosineSimilarity(std::span<const float> u, std::span<const float> v);

// Jensen-Shannon divergence with logarithms in `base`; 0 log 0 = 0.
double JsDivergence(std::span<const float> p, std::span<const float> q, double base = 2.0);
// sqrt(JsDivergence); in [0, 1] for base 2.
double JsDistance(std::span<const float> p, std::span<const float> q, double base = 2.0);

// DTW over per-frame JS distance; mean distance along the optimal path.
// Both inputs must be valid posteriorgrams with the same class count.
double PpgJsDistance(const FeatureSequence &p, const FeatureSequence &q, double base = 2.0);

struct EditCounts {
  size_t substitutions = 0;
  size_t deletions = 0;
  size_t insertions = 0;
  size_t reference_length = 0;
  size_t Errors() const { return substitutions + deletions + insertions; }
};

// Minimum-edit (Levenshtein) alignment of two word sequences.  Among
// equally cheap alignments, the one with the most substitutions is kept.
EditCounts AlignWords(const std::vector<std::string> &ref, const std::vector<std::string> &hyp);

// (S + D + I) / N over TokenizeTranscript tokens; DataError if the
// reference has no words.
double WordErrorRate(std::string_view ref_text, std::string_view hyp_text);

enum class WerPooling { kTokens, kUtterances };
std::string WerPoolingName(WerPooling pooling);
WerPooling ParseWerPooling(const std::string &name);

// kTokens: sum of errors / sum of reference words.  kUtterances: mean of
// per-utterance rates.  Throws DataError on empty input.
double CorpusWordErrorRate(const std::vector<EditCounts> &counts,
                           WerPooling pooling = WerPooling::kTokens);

// One converted (or copy-synthesized) utterance: source_speaker_id provided
// the tokens, target_speaker_id the voice.  Copy-synthesis has
// source == target.
struct GeneratedRecord {
  std::string utt_id;
  std::string source_speaker_id;
  std::string target_speaker_id;
  int64_t utterance_index = 0;
};

// JSON Lines {utt_id, source_speaker_id, target_speaker_id, utterance_index}.
std::vector<GeneratedRecord> LoadGeneratedManifest(const std::filesystem::path &path);
void WriteGeneratedManifest(const std::filesystem::path &path,
                            const std::vector<GeneratedRecord> &records);

enum class Direction { kToSource, kToTarget };
std::string DirectionName(Direction direction);

enum class Metric { kAccentSim, kSpeakerSim, kPpg, kWer };
std::string MetricName(Metric metric);

struct EvalPair {
  std::string generated_utt;
  std::string reference_utt;
  Direction direction = Direction::kToSource;
  std::vector<Metric> metrics;
  int64_t utterance_index = 0;
};

struct PlanOptions {
  uint64_t seed = 42;
  // Similarity and PPG pairs use utterances below this index.
  int64_t shared_text_utterances = 24;
  // WER utterances sampled per source speaker.
  size_t wer_per_speaker = 24;
};

// Pairs each generated utterance below the shared-text index with its
// source- and target-speaker ground truth of the same index, and samples
// wer_per_speaker generated utterances per source speaker for WER against
// the source ground truth.  `target_speakers`, when given, restricts the
// generated set.  Throws DataError on a missing counterpart.
std::vector<EvalPair> BuildEvalPlan(const Manifest &reference,
                                    const std::vector<GeneratedRecord> &generated,
                                    const PlanOptions &options,
                                    const std::set<std::string> *target_speakers = nullptr);

// Artifacts keyed by utt_id; any may be absent.
struct MetricInputs {
  const EmbeddingTable *accent = nullptr;
  const EmbeddingTable *speaker = nullptr;
  const PpgStore *ppg = nullptr;
  const std::map<std::string, std::string> *hypotheses = nullptr;
};

struct MetricOptions {
  PlanOptions plan;
  double js_base = 2.0;
  WerPooling wer_pooling = WerPooling::kTokens;
  int workers = 0;
};

struct Bound {
  std::optional<double> lower;
  std::optional<double> upper;
  size_t lower_pairs = 0;
  size_t upper_pairs = 0;
  std::vector<std::string> flags;
};

// Lower: source GT against target GT of the same index, over the speaker
// pairs of `generated`.  Upper: copy-synthesis against its own GT, using
// source speakers, except for kSpeakerSim which uses target speakers.  A
// missing copy-synthesis set leaves the upper bound empty and flagged.
Bound ComputeBounds(Metric metric, const Manifest &reference,
                    const std::vector<GeneratedRecord> &generated,
                    const std::vector<GeneratedRecord> *copy_synthesis,
                    const MetricInputs &inputs, const MetricOptions &options);

struct PairResult {
  EvalPair pair;
  std::optional<double> accent_sim;
  std::optional<double> speaker_sim;
  std::optional<double> ppg;
  std::optional<EditCounts> wer_counts;
};

// Column values in table order; unset when no input supports them.
struct MetricSummary {
  static const std::vector<std::string> &Columns();  // A-SIM (src) ... WER
  std::map<std::string, std::optional<double>> values;
  std::map<std::string, size_t> counts;
};

struct MetricReport {
  std::vector<PairResult> pairs;
  MetricSummary summary;
  std::map<std::string, Bound> bounds;  // keyed by A-SIM, S-SIM, PPG, WER
  std::vector<std::string> warnings;
  std::vector<std::string> metrics_missing;
  double js_base = 2.0;
  WerPooling wer_pooling = WerPooling::kTokens;
};

// Evaluates every pair for which inputs exist.  Metrics without inputs are
// reported as missing; pairs lacking one artifact leave that value unset
// and add a warning.
MetricReport ComputeMetricReport(const std::vector<EvalPair> &plan, const Manifest &reference,
                                 const std::vector<GeneratedRecord> &generated,
                                 const std::vector<GeneratedRecord> *copy_synthesis,
                                 const MetricInputs &inputs, const MetricOptions &options);

}  // namespace dsrt

#endif  // DSRT_RECOVERABILITY_H_
