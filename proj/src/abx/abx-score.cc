// src/abx/abx-score.cc

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

#include <algorithm>
#include <cmath>
#include <map>
#include <unordered_map>

#include "dsrt/abx.h"
#include "dsrt/dtw.h"
#include "dsrt/error.h"
#include "dsrt/parallel.h"
#include "dsrt/rng.h"

namespace dsrt {

double ScoreFromDistances(double d_ax, double d_bx) {
  if (d_ax < d_bx) return 0.0;
  if (d_bx < d_ax) return 1.0;
  return 0.5;
}

double ScoreTriplet(const Triplet &t, const SegmentFeatures &features) {
  const Matrix &x = features.Get(t.x);
  return ScoreFromDistances(DtwDistance(features.Get(t.a), x), DtwDistance(features.Get(t.b), x));
}

AbxReport AbxErrorRate(const AbxCondition &condition, const std::vector<AbxCell> &cells,
                       const SegmentFeatures &features, int workers) {
  if (cells.empty()) throw DataError("no ABX cells to score");
  AbxReport report;
  report.condition = condition.Name();
  report.cells.resize(cells.size());
  const uint64_t n = features.Size();
  ParallelFor(cells.size(), workers, [&](size_t begin, size_t end) {
    for (size_t c = begin; c < end; ++c) {
      const AbxCell &cell = cells[c];
      if (cell.triplets.empty())
        throw DataError("ABX cell " + FormatCellKey(cell.key) + " has no triplets");
      std::unordered_map<uint64_t, double> cache;
      auto dist = [&](size_t i, size_t j) {
        uint64_t key = std::min(i, j) * n + std::max(i, j);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
        double d = DtwDistance(features.Get(i), features.Get(j));
        cache.emplace(key, d);
        return d;
      };
      double sum = 0.0;
      for (const Triplet &t : cell.triplets) sum += ScoreFromDistances(dist(t.a, t.x), dist(t.b, t.x));
      CellResult &r = report.cells[c];
      r.key = cell.key;
      r.triplet_count = cell.triplets.size();
      r.score = sum / static_cast<double>(cell.triplets.size());
    }
  });
  double sum = 0.0;
  for (const CellResult &r : report.cells) {
    sum += r.score;
    report.total_triplets += r.triplet_count;
  }
  report.aggregate = sum / static_cast<double>(report.cells.size());
  return report;
}

namespace {

std::vector<bool> NeededItems(const SegmentPool &pool, const std::vector<AbxCell> &cells) {
  std::vector<bool> needed(pool.Size(), false);
  for (const AbxCell &cell : cells)
    for (const Triplet &t : cell.triplets) needed[t.a] = needed[t.b] = needed[t.x] = true;
  return needed;
}

AbxReport ScoreEnumeration(const AbxCondition &condition, const SegmentPool &pool,
                           const Manifest &manifest, Enumeration enumeration,
                           const Representation &repr, const AbxRunOptions &options) {
  std::vector<bool> needed = NeededItems(pool, enumeration.cells);
  SegmentFeatures features = SegmentFeatures::Load(pool, manifest, repr, options.workers, &needed);
  AbxReport report = AbxErrorRate(condition, enumeration.cells, features, options.workers);
  report.dropped = std::move(enumeration.dropped);
  return report;
}

}  // namespace

AbxReport RunAbx(const AbxCondition &condition, const Manifest &manifest,
                 const Representation &repr, const AbxRunOptions &options) {
  SegmentPool pool = SegmentPool::Build(manifest, {condition.SegmentTier(), std::nullopt});
  Enumeration en = EnumerateTriplets(condition, pool, options.caps, options.seed);
  if (en.cells.empty())
    throw DataError("no " + condition.Name() + " ABX cell has a valid triplet");
  size_t dropped = en.dropped.size();
  AbxReport report = ScoreEnumeration(condition, pool, manifest, std::move(en), repr, options);
  if (dropped) {
    report.warnings.push_back(std::to_string(dropped) + " " + condition.Name() +
                              " ABX cells dropped: no valid triplets");
    Warn(report.warnings.back());
  }
  return report;
}

std::vector<WordCount> TopWords(const Manifest &manifest, Split split, size_t n) {
  std::map<std::string, size_t> counts;
  for (const UtteranceRecord &rec : manifest.Records())
    if (rec.split == split)
      for (const std::string &w : TokenizeTranscript(rec.text)) ++counts[w];
  std::vector<WordCount> words;
  for (const auto &[w, c] : counts) words.push_back({w, c});
  std::stable_sort(words.begin(), words.end(),
                   [](const WordCount &a, const WordCount &b) { return a.count > b.count; });
  if (words.size() > n) words.resize(n);
  return words;
}

CombinationList SelectAccentWordCombinations(const Manifest &manifest,
                                             const Representation &selector, size_t top_n_words,
                                             double p_percent, const AbxRunOptions &options) {
  if (!(p_percent > 0.0 && p_percent <= 100.0))
    throw ConfigError("p_percent must be in (0, 100]");
  if (top_n_words == 0) throw ConfigError("top_n_words must be positive");
  std::vector<UtteranceRecord> train_records;
  for (const UtteranceRecord &rec : manifest.Records())
    if (rec.split == Split::kTrain) train_records.push_back(rec);
  if (train_records.empty()) throw DataError("manifest has no train utterances");
  Manifest train = Manifest::FromRecords(std::move(train_records), manifest.BaseDir());
  if (train.Regions().size() < 2)
    throw DataError("word selection needs at least two accents in the train split");

  std::set<std::string> words;
  for (const WordCount &wc : TopWords(train, Split::kTrain, top_n_words)) words.insert(wc.word);
  SegmentPool pool = SegmentPool::Build(train, {Tier::kWord, words});
  AbxCondition cond = AbxCondition::Accent();
  Enumeration en = EnumerateTriplets(cond, pool, options.caps, options.seed);
  if (en.cells.empty())
    throw DataError("no (accent, accent, word) cell of the train split has a valid triplet");
  AbxReport scored = ScoreEnumeration(cond, pool, train, std::move(en), selector, options);

  std::vector<Combination> all;
  for (const CellResult &r : scored.cells)
    all.push_back({r.key[0], r.key[1], r.key[2], r.score, r.triplet_count});
  std::sort(all.begin(), all.end(), [](const Combination &a, const Combination &b) {
    if (a.train_score != b.train_score) return a.train_score < b.train_score;
    return std::tie(a.accent_a, a.accent_b, a.word) < std::tie(b.accent_a, b.accent_b, b.word);
  });
  CombinationList list;
  list.p_percent = p_percent;
  list.candidate_count = all.size();
  auto keep = static_cast<size_t>(std::round(p_percent / 100.0 * static_cast<double>(all.size())));
  all.resize(std::min(keep, all.size()));
  list.entries = std::move(all);
  if (list.entries.empty())
    Warn("p_percent " + std::to_string(p_percent) + " of " +
         std::to_string(list.candidate_count) + " candidates retains no combination");
  return list;
}

AbxReport AccentAbxScore(const Manifest &manifest, const CombinationList &combinations,
                         const Representation &repr, const AbxRunOptions &options) {
  if (combinations.entries.empty()) throw DataError("combination list is empty");
  std::vector<UtteranceRecord> test_records;
  for (const UtteranceRecord &rec : manifest.Records())
    if (rec.split == Split::kTest) test_records.push_back(rec);
  if (test_records.empty()) throw DataError("manifest has no test utterances");
  Manifest test = Manifest::FromRecords(std::move(test_records), manifest.BaseDir());

  std::set<std::string> words;
  std::vector<CellKey> keys;
  for (const Combination &c : combinations.entries) {
    words.insert(c.word);
    keys.push_back({c.accent_a, c.accent_b, c.word});
  }
  SegmentPool pool = SegmentPool::Build(test, {Tier::kWord, words});
  AbxCondition cond = AbxCondition::Accent();
  Enumeration en = EnumerateTriplets(cond, pool, options.caps, options.seed, &keys);
  if (en.cells.empty())
    throw DataError("no retained combination has a valid triplet on the test split");
  size_t dropped = en.dropped.size();
  AbxReport report = ScoreEnumeration(cond, pool, test, std::move(en), repr, options);
  if (dropped) {
    report.warnings.push_back(std::to_string(dropped) + " of " + std::to_string(keys.size()) +
                              " retained combinations dropped: no test triplets");
    Warn(report.warnings.back());
  }
  return report;
}

Manifest PermuteAccentLabels(const Manifest &manifest, uint64_t seed) {
  std::map<std::string, std::string> relabel;
  for (Split split : {Split::kTrain, Split::kTest}) {
    std::vector<std::string> speakers, accents;
    for (const auto &[spk, s] : manifest.SpeakerSplit()) {
      if (s != split) continue;
      speakers.push_back(spk);
      accents.push_back(manifest.SpeakerAccent().at(spk));
    }
    Rng rng(DeriveSeed(seed, "permute-accents/" + SplitName(split)));
    rng.Shuffle(accents.begin(), accents.end());
    for (size_t i = 0; i < speakers.size(); ++i) relabel[speakers[i]] = accents[i];
  }
  std::vector<UtteranceRecord> records = manifest.Records();
  for (UtteranceRecord &rec : records) rec.accent_region = relabel.at(rec.speaker_id);
  return Manifest::FromRecords(std::move(records), manifest.BaseDir());
}

}  // namespace dsrt
