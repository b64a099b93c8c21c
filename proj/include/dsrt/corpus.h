// include/dsrt/corpus.h

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

#ifndef DSRT_CORPUS_H_
#define DSRT_CORPUS_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dsrt/matrix.h"

namespace dsrt {

// T x D frames at a fixed frame rate.
struct FeatureSequence {
  Matrix frames;
  float frame_rate_hz = 0.0f;

  size_t NumFrames() const { return frames.NumRows(); }
  size_t Dim() const { return frames.NumCols(); }
  double DurationSeconds() const { return static_cast<double>(NumFrames()) / frame_rate_hz; }

  // Throws DataError unless T >= 1, D >= 1, rate > 0 and all values finite.
  void Validate() const;
};

enum class Split { kTrain, kTest };

std::string SplitName(Split split);
Split ParseSplit(const std::string &name);

struct UtteranceRecord {
  std::string utt_id;
  std::string speaker_id;
  std::string accent_region;
  Split split = Split::kTrain;
  std::string text;
  std::string feature_path;
  std::optional<std::string> word_alignment_path;
  std::optional<std::string> phone_alignment_path;
  int64_t utterance_index = 0;
};

// A validated set of utterance records.  Immutable once built.
class Manifest {
 public:
  Manifest() = default;

  // Validates and indexes the records.  `base_dir` anchors relative paths.
  // Throws DataError for duplicate utt_ids, a speaker listed under two
  // accents or two splits, negative indices, and empty input.
  static Manifest FromRecords(std::vector<UtteranceRecord> records,
                              std::filesystem::path base_dir = {});

  const std::vector<UtteranceRecord> &Records() const { return records_; }
  size_t Size() const { return records_.size(); }

  const UtteranceRecord *Find(const std::string &utt_id) const;
  const UtteranceRecord *FindBySpeakerIndex(const std::string &speaker_id,
                                            int64_t index) const;

  const std::map<std::string, std::string> &SpeakerAccent() const { return speaker_accent_; }
  const std::map<std::string, Split> &SpeakerSplit() const { return speaker_split_; }
  std::vector<std::string> Speakers() const;
  std::vector<std::string> Regions() const;

  // Copy restricted to one split; same base directory.
  Manifest FilterSplit(Split split) const;

  // Non-fatal findings: gaps in per-speaker utterance indices and accent
  // regions outside the known label set.
  const std::vector<std::string> &Warnings() const { return warnings_; }

  std::filesystem::path ResolvePath(const std::string &path) const;
  const std::filesystem::path &BaseDir() const { return base_dir_; }

 private:
  std::vector<UtteranceRecord> records_;
  std::map<std::string, size_t> by_utt_;
  std::map<std::pair<std::string, int64_t>, size_t> by_speaker_index_;
  std::map<std::string, std::string> speaker_accent_;
  std::map<std::string, Split> speaker_split_;
  std::vector<std::string> warnings_;
  std::filesystem::path base_dir_;
};

// Reads a JSON Lines manifest.  Relative paths inside it resolve against
// `feature_root` when given, else against the manifest's directory.
Manifest LoadManifest(const std::filesystem::path &path,
                      const std::filesystem::path &feature_root = {});
void WriteManifest(const std::filesystem::path &path,
                   const std::vector<UtteranceRecord> &records);

// The 13 accent-region labels used for VCTK.
const std::vector<std::string> &KnownAccentRegions();

struct VctkSpeakerInfo {
  std::string accent_region;
  Split split;
};
// Accent region and split of a VCTK speaker in the reference partition.
std::optional<VctkSpeakerInfo> LookupVctkSpeaker(const std::string &speaker_id);
// One message per speaker whose region or split disagrees with the
// reference partition; speakers absent from it are ignored.
std::vector<std::string> CheckAgainstVctkPartition(const Manifest &manifest);

// ---- FTR feature files ----------------------------------------------------
// "FTR1", u32 T, u32 D, f32 frame_rate_hz, then T*D f32, all little-endian.

std::vector<unsigned char> EncodeFeatures(const FeatureSequence &seq);
FeatureSequence DecodeFeatures(const std::vector<unsigned char> &bytes,
                               const std::string &what = "<memory>");
FeatureSequence ReadFeatureFile(const std::filesystem::path &path);
void WriteFeatureFile(const std::filesystem::path &path, const FeatureSequence &seq);

// ---- Alignments and segments ------------------------------------------------

enum class Tier { kWord, kPhone };

struct Segment {
  std::string utt_id;
  std::string label;
  double start_s = 0.0;
  double end_s = 0.0;
  std::optional<std::string> prev_label;
  std::optional<std::string> next_label;
};

// Context symbol standing for an utterance edge or a pause.
inline constexpr std::string_view kBoundaryLabel = "#";

// True for the pause labels forced aligners emit ("", sil, sp, spn, <eps>).
bool IsSilenceLabel(std::string_view label);

// Parses "start<TAB>end<TAB>label" lines.  Word labels are normalized with
// TokenizeTranscript; pause intervals are dropped.  Phone segments get
// prev/next labels from their neighbours, kBoundaryLabel at edges/pauses.
std::vector<Segment> ParseAlignment(std::string_view text, const std::string &utt_id,
                                    Tier tier, const std::string &what = "<memory>");
std::vector<Segment> ReadAlignmentFile(const std::filesystem::path &path,
                                       const std::string &utt_id, Tier tier);

// Frame range [first, last) covered by a segment: floor(start*rate) to
// ceil(end*rate), never empty.
std::pair<size_t, size_t> SegmentFrameRange(const FeatureSequence &seq, const Segment &seg);
FeatureSequence SliceSegment(const FeatureSequence &seq, const Segment &seg);

// Lowercases, strips leading/trailing punctuation from each
// whitespace-separated token, and drops internal punctuation except
// apostrophes between letters or digits.
std::vector<std::string> TokenizeTranscript(std::string_view text);

// ---- Utterance-level side inputs ------------------------------------------

enum class EmbeddingKind { kAccent, kSpeaker };

// utt_id -> vector.  Loaded from a JSON Lines sidecar
// ({"utt_id": ..., "vector": [...]}) or a directory of one-row FTR files
// named <utt_id>.ftr.
class EmbeddingTable {
 public:
  static EmbeddingTable Load(const std::filesystem::path &path);
  static EmbeddingTable FromMap(std::map<std::string, std::vector<float>> vectors);

  const std::vector<float> *Find(const std::string &utt_id) const;
  size_t Dim() const { return dim_; }
  size_t Size() const { return vectors_.size(); }

 private:
  std::map<std::string, std::vector<float>> vectors_;
  size_t dim_ = 0;
};

// Throws DataError unless every row is a distribution within `tol`.
void ValidatePpg(const FeatureSequence &ppg, double tol = 1e-4);

// Directory of <utt_id>.ftr posteriorgrams, validated on read.
class PpgStore {
 public:
  explicit PpgStore(std::filesystem::path dir) : dir_(std::move(dir)) {}
  bool Has(const std::string &utt_id) const;
  FeatureSequence Read(const std::string &utt_id) const;

 private:
  std::filesystem::path dir_;
};

// JSON Lines {"utt_id": ..., "text": ...}; duplicate ids are an error.
std::map<std::string, std::string> LoadTranscripts(const std::filesystem::path &path);

}  // namespace dsrt

#endif  // DSRT_CORPUS_H_
