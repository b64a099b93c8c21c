// include/dsrt/abx.h

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

#ifndef DSRT_ABX_H_
#define DSRT_ABX_H_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "dsrt/corpus.h"
#include "dsrt/quantizer.h"

namespace dsrt {

enum class AbxCategory { kAccent, kSpeaker, kPhone, kWord, kContext };
std::string CategoryName(AbxCategory category);

// ON / BY / ACROSS triplet constraints.  Only the three schemas below can
// be built:
//   accent : on accent,  by word,          across speaker (a, b, x pairwise distinct)
//   speaker: on speaker, by word + accent
//   phone  : on phone,   by context (prev and next phone), across speaker
//            (a and b share a speaker, x comes from another one)
class AbxCondition {
 public:
  static AbxCondition Accent();
  static AbxCondition Speaker();
  static AbxCondition Phone();
  // "accent", "speaker" or "phone"; ConfigError otherwise.
  static AbxCondition FromName(std::string_view name);

  const std::string &Name() const { return name_; }
  AbxCategory On() const { return on_; }
  const std::vector<AbxCategory> &By() const { return by_; }
  const std::vector<AbxCategory> &Across() const { return across_; }
  bool AbSameSpeaker() const { return ab_same_speaker_; }
  Tier SegmentTier() const { return on_ == AbxCategory::kPhone ? Tier::kPhone : Tier::kWord; }

 private:
  AbxCondition() = default;
  std::string name_;
  AbxCategory on_ = AbxCategory::kAccent;
  std::vector<AbxCategory> by_, across_;
  bool ab_same_speaker_ = false;
};

// One word or phone token with the metadata triplet constraints refer to.
struct PoolItem {
  Segment segment;
  std::string speaker;
  std::string accent;
  int64_t utterance_index = 0;
};

class SegmentPool {
 public:
  struct Options {
    Tier tier = Tier::kWord;
    // Keep only tokens whose label is in this set (all when unset).
    std::optional<std::set<std::string>> labels;
  };

  // Reads the alignment file of every record for the requested tier.
  // Records without one are skipped; if none has one, throws DataError.
  static SegmentPool Build(const Manifest &manifest, const Options &options);
  static SegmentPool FromItems(Tier tier, std::vector<PoolItem> items);

  Tier GetTier() const { return tier_; }
  const std::vector<PoolItem> &Items() const { return items_; }
  const PoolItem &operator[](size_t i) const { return items_[i]; }
  size_t Size() const { return items_.size(); }

 private:
  Tier tier_ = Tier::kWord;
  std::vector<PoolItem> items_;
};

// Attribute of a pool item for a category; context is "prev|next".
std::string CategoryValue(const PoolItem &item, AbxCategory category);

struct Triplet {
  size_t a = 0, b = 0, x = 0;  // indices into the SegmentPool
  friend bool operator==(const Triplet &, const Triplet &) = default;
};

// accent: (accent_A, accent_B, word); speaker: (speaker_A, speaker_B, word,
// accent); phone: (phone_A, phone_B, prev, next).  A is the category shared
// by a and x.
using CellKey = std::vector<std::string>;
std::string FormatCellKey(const CellKey &key);

struct AbxCell {
  CellKey key;
  std::vector<Triplet> triplets;
  // Size of the full valid (a, b, x) cross-product before capping.
  uint64_t population = 0;
};

struct SamplingCaps {
  size_t max_per_cell = 500;
  // Utterances with a smaller utterance_index never enter a triplet.
  int64_t min_utterance_index = 24;
};

struct Enumeration {
  std::vector<AbxCell> cells;
  // Candidate or requested cells without a single valid triplet.
  std::vector<CellKey> dropped;
};

// Builds every cell of the condition (or only `requested` cells) from the
// pool.  Cells whose valid cross-product exceeds caps.max_per_cell are
// sampled uniformly without replacement, seeded per cell from `seed` and
// the cell key, so the sample does not depend on enumeration order.
Enumeration EnumerateTriplets(const AbxCondition &condition, const SegmentPool &pool,
                              const SamplingCaps &caps, uint64_t seed,
                              const std::vector<CellKey> *requested = nullptr);

// Independent re-check of every ON/BY/ACROSS rule, the cell key, and the
// utterance-index floor.  Returns human-readable violations (empty if ok).
std::vector<std::string> CheckTriplet(const AbxCondition &condition, const SegmentPool &pool,
                                      const AbxCell &cell, const Triplet &triplet,
                                      const SamplingCaps &caps);

// ---- Representations --------------------------------------------------------

// Maps an utterance to its feature file.
using FeatureLocator = std::function<std::filesystem::path(const UtteranceRecord &)>;
// Applied to every sliced segment; identity when empty.
using FrameTransform = std::function<FeatureSequence(const FeatureSequence &)>;

struct Representation {
  std::string name;
  FeatureLocator locate;
  FrameTransform transform;
};

// feature_path of each record, resolved against the manifest.
Representation ContinuousRepresentation(const Manifest &manifest);
// <dir>/<utt_id>.ftr
Representation DirectoryRepresentation(std::filesystem::path dir, std::string name);
// Features quantized with `codebook` and embedded per `embedding`.
Representation TokenRepresentation(Representation base, std::shared_ptr<const Codebook> codebook,
                                   TokenEmbedding embedding);

// Segment features for (a subset of) a pool, loaded once per utterance.
class SegmentFeatures {
 public:
  // Loads the items flagged in `needed` (all when null).  Every utterance
  // must share one frame rate.
  static SegmentFeatures Load(const SegmentPool &pool, const Manifest &manifest,
                              const Representation &repr, int workers,
                              const std::vector<bool> *needed = nullptr);
  static SegmentFeatures FromMatrices(std::vector<Matrix> segments);

  // Throws DataError when item i was not loaded.
  const Matrix &Get(size_t i) const;
  size_t Size() const { return segments_.size(); }

 private:
  std::vector<std::optional<Matrix>> segments_;
};

// 0 if d_ax < d_bx, 1 if d_bx < d_ax, 0.5 on exact equality.
double ScoreFromDistances(double d_ax, double d_bx);
double ScoreTriplet(const Triplet &triplet, const SegmentFeatures &features);

struct CellResult {
  CellKey key;
  size_t triplet_count = 0;
  double score = 0.0;
};

struct AbxReport {
  std::string condition;
  std::vector<CellResult> cells;
  double aggregate = 0.0;  // unweighted mean of cell scores
  size_t total_triplets = 0;
  std::vector<CellKey> dropped;
  std::vector<std::string> warnings;
};

// Scores cells in parallel; each cell's score is the mean of its triplet
// outcomes and the aggregate is the unweighted mean over cells.
AbxReport AbxErrorRate(const AbxCondition &condition, const std::vector<AbxCell> &cells,
                       const SegmentFeatures &features, int workers);

// ---- Accent-discriminative word selection ------------------------------------

struct WordCount {
  std::string word;
  size_t count = 0;
};
// Most frequent transcript words of one split, by count then alphabetically.
std::vector<WordCount> TopWords(const Manifest &manifest, Split split, size_t n);

struct Combination {
  std::string accent_a;
  std::string accent_b;
  std::string word;
  double train_score = 0.0;
  size_t triplet_count = 0;
};

struct CombinationList {
  std::vector<Combination> entries;  // ascending train_score
  double p_percent = 10.0;
  size_t candidate_count = 0;
};

struct AbxRunOptions {
  SamplingCaps caps;
  uint64_t seed = 42;
  int workers = 0;
};

// Scores every (accent_A, accent_B, word) cell over the top-N train words
// on `selector` features and keeps the round(p/100 * candidates) lowest.
CombinationList SelectAccentWordCombinations(const Manifest &manifest,
                                             const Representation &selector, size_t top_n_words,
                                             double p_percent, const AbxRunOptions &options);

// Rebuilds the retained cells on test speakers and scores them.
AbxReport AccentAbxScore(const Manifest &manifest, const CombinationList &combinations,
                         const Representation &repr, const AbxRunOptions &options);

// All cells of a condition over the given manifest (already split-filtered).
AbxReport RunAbx(const AbxCondition &condition, const Manifest &manifest,
                 const Representation &repr, const AbxRunOptions &options);

// Permutes the speaker -> accent map (group sizes preserved, separately
// within each split) for label-permutation null checks.
Manifest PermuteAccentLabels(const Manifest &manifest, uint64_t seed);

}  // namespace dsrt

#endif  // DSRT_ABX_H_
