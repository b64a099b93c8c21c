// src/abx/abx-triplets.cc

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

#include "dsrt/abx.h"

#include <algorithm>
#include <map>
#include <unordered_set>

#include "dsrt/error.h"
#include "dsrt/rng.h"

namespace dsrt {

std::string CategoryName(AbxCategory category) {
  switch (category) {
    case AbxCategory::kAccent: return "accent";
    case AbxCategory::kSpeaker: return "speaker";
    case AbxCategory::kPhone: return "phone";
    case AbxCategory::kWord: return "word";
    case AbxCategory::kContext: return "context";
  }
  return "?";
}

AbxCondition AbxCondition::Accent() {
  AbxCondition c;
  c.name_ = "accent";
  c.on_ = AbxCategory::kAccent;
  c.by_ = {AbxCategory::kWord};
  c.across_ = {AbxCategory::kSpeaker};
  return c;
}

AbxCondition AbxCondition::Speaker() {
  AbxCondition c;
  c.name_ = "speaker";
  c.on_ = AbxCategory::kSpeaker;
  c.by_ = {AbxCategory::kWord, AbxCategory::kAccent};
  return c;
}

AbxCondition AbxCondition::Phone() {
  AbxCondition c;
  c.name_ = "phone";
  c.on_ = AbxCategory::kPhone;
  c.by_ = {AbxCategory::kContext};
  c.across_ = {AbxCategory::kSpeaker};
  c.ab_same_speaker_ = true;
  return c;
}

AbxCondition AbxCondition::FromName(std::string_view name) {
  if (name == "accent") return Accent();
  if (name == "speaker") return Speaker();
  if (name == "phone") return Phone();
  throw ConfigError("unknown ABX condition '" + std::string(name) +
                    "' (expected accent, speaker or phone)");
}

SegmentPool SegmentPool::Build(const Manifest &manifest, const Options &options) {
  SegmentPool pool;
  pool.tier_ = options.tier;
  const char *tier_name = options.tier == Tier::kWord ? "word" : "phone";
  size_t with_alignment = 0;
  for (const UtteranceRecord &rec : manifest.Records()) {
    const auto &path =
        options.tier == Tier::kWord ? rec.word_alignment_path : rec.phone_alignment_path;
    if (!path) continue;
    ++with_alignment;
    for (Segment &seg : ReadAlignmentFile(manifest.ResolvePath(*path), rec.utt_id, options.tier)) {
      if (options.labels && !options.labels->count(seg.label)) continue;
      PoolItem item;
      item.segment = std::move(seg);
      item.speaker = rec.speaker_id;
      item.accent = rec.accent_region;
      item.utterance_index = rec.utterance_index;
      pool.items_.push_back(std::move(item));
    }
  }
  if (with_alignment == 0)
    throw DataError(std::string("no utterance has a ") + tier_name + " alignment path");
  return pool;
}

SegmentPool SegmentPool::FromItems(Tier tier, std::vector<PoolItem> items) {
  SegmentPool pool;
  pool.tier_ = tier;
  pool.items_ = std::move(items);
  return pool;
}

std::string CategoryValue(const PoolItem &item, AbxCategory category) {
  switch (category) {
    case AbxCategory::kAccent: return item.accent;
    case AbxCategory::kSpeaker: return item.speaker;
    case AbxCategory::kPhone:
    case AbxCategory::kWord: return item.segment.label;
    case AbxCategory::kContext:
      return item.segment.prev_label.value_or(std::string(kBoundaryLabel)) + "|" +
             item.segment.next_label.value_or(std::string(kBoundaryLabel));
  }
  return {};
}

std::string FormatCellKey(const CellKey &key) {
  std::string out = "(";
  for (size_t i = 0; i < key.size(); ++i) {
    if (i) out += ", ";
    out += key[i];
  }
  return out + ")";
}

namespace {

// Values of the BY categories as they appear in a cell key.
std::vector<std::string> ByKeyParts(const AbxCondition &cond, const PoolItem &item) {
  std::vector<std::string> parts;
  for (AbxCategory c : cond.By()) {
    if (c == AbxCategory::kContext) {
      parts.push_back(item.segment.prev_label.value_or(std::string(kBoundaryLabel)));
      parts.push_back(item.segment.next_label.value_or(std::string(kBoundaryLabel)));
    } else {
      parts.push_back(CategoryValue(item, c));
    }
  }
  return parts;
}

using IndexList = std::vector<size_t>;

// Every x comes with its own candidate lists for a and b; the valid
// triplets of a cell are the union of the per-group products.
struct Group {
  size_t x;
  IndexList a, b;
};

class CellIndex {
 public:
  CellIndex(const AbxCondition &cond, const SegmentPool &pool, const SamplingCaps &caps)
      : cond_(cond), pool_(pool) {
    for (size_t i = 0; i < pool.Size(); ++i) {
      const PoolItem &it = pool[i];
      if (it.utterance_index < caps.min_utterance_index) continue;
      switch (cond.On()) {
        case AbxCategory::kAccent:
          by_word_accent_[it.segment.label][it.accent].push_back(i);
          break;
        case AbxCategory::kSpeaker:
          by_word_accent_speaker_[{it.segment.label, it.accent}][it.speaker].push_back(i);
          break;
        default:
          by_context_phone_speaker_[CategoryValue(it, AbxCategory::kContext)][it.segment.label]
                                   [it.speaker].push_back(i);
          break;
      }
    }
  }

  std::vector<CellKey> CandidateKeys() const {
    std::vector<CellKey> keys;
    switch (cond_.On()) {
      case AbxCategory::kAccent:
        for (const auto &[word, by_acc] : by_word_accent_)
          for (const auto &[acc_a, la] : by_acc)
            for (const auto &[acc_b, lb] : by_acc)
              if (acc_a != acc_b) keys.push_back({acc_a, acc_b, word});
        break;
      case AbxCategory::kSpeaker:
        for (const auto &[wa, by_spk] : by_word_accent_speaker_)
          for (const auto &[spk_a, la] : by_spk)
            for (const auto &[spk_b, lb] : by_spk)
              if (spk_a != spk_b) keys.push_back({spk_a, spk_b, wa.first, wa.second});
        break;
      default:
        for (const auto &[ctx, by_phone] : by_context_phone_speaker_) {
          auto bar = ctx.find('|');
          std::string prev = ctx.substr(0, bar), next = ctx.substr(bar + 1);
          for (const auto &[ph_a, la] : by_phone)
            for (const auto &[ph_b, lb] : by_phone)
              if (ph_a != ph_b) keys.push_back({ph_a, ph_b, prev, next});
        }
        break;
    }
    std::sort(keys.begin(), keys.end());
    return keys;
  }

  std::vector<Group> Groups(const CellKey &key) const {
    std::vector<Group> groups;
    switch (cond_.On()) {
      case AbxCategory::kAccent: {
        if (key.size() != 3) break;
        const IndexList *xa = Lookup(by_word_accent_, key[2], key[0]);
        const IndexList *xb = Lookup(by_word_accent_, key[2], key[1]);
        if (!xa || !xb) break;
        for (size_t x : *xa) {
          Group g{x, {}, {}};
          const std::string &sx = pool_[x].speaker;
          for (size_t a : *xa)
            if (pool_[a].speaker != sx) g.a.push_back(a);
          for (size_t b : *xb)
            if (pool_[b].speaker != sx) g.b.push_back(b);
          groups.push_back(std::move(g));
        }
        break;
      }
      case AbxCategory::kSpeaker: {
        if (key.size() != 4) break;
        auto it = by_word_accent_speaker_.find({key[2], key[3]});
        if (it == by_word_accent_speaker_.end()) break;
        auto ia = it->second.find(key[0]), ib = it->second.find(key[1]);
        if (ia == it->second.end() || ib == it->second.end()) break;
        for (size_t x : ia->second) {
          Group g{x, {}, ib->second};
          for (size_t a : ia->second)
            if (a != x) g.a.push_back(a);
          groups.push_back(std::move(g));
        }
        break;
      }
      default: {
        if (key.size() != 4) break;
        auto it = by_context_phone_speaker_.find(key[2] + "|" + key[3]);
        if (it == by_context_phone_speaker_.end()) break;
        auto ia = it->second.find(key[0]), ib = it->second.find(key[1]);
        if (ia == it->second.end() || ib == it->second.end()) break;
        IndexList xs;
        for (const auto &[spk, list] : ia->second) xs.insert(xs.end(), list.begin(), list.end());
        std::sort(xs.begin(), xs.end());
        for (size_t x : xs) {
          for (const auto &[spk, la] : ia->second) {
            if (spk == pool_[x].speaker) continue;
            auto lb = ib->second.find(spk);
            if (lb == ib->second.end()) continue;
            groups.push_back(Group{x, la, lb->second});
          }
        }
        break;
      }
    }
    return groups;
  }

 private:
  static const IndexList *Lookup(const std::map<std::string, std::map<std::string, IndexList>> &m,
                                 const std::string &k1, const std::string &k2) {
    auto i = m.find(k1);
    if (i == m.end()) return nullptr;
    auto j = i->second.find(k2);
    return j == i->second.end() ? nullptr : &j->second;
  }

  const AbxCondition &cond_;
  const SegmentPool &pool_;
  std::map<std::string, std::map<std::string, IndexList>> by_word_accent_;
  std::map<std::pair<std::string, std::string>, std::map<std::string, IndexList>>
      by_word_accent_speaker_;
  std::map<std::string, std::map<std::string, std::map<std::string, IndexList>>>
      by_context_phone_speaker_;
};

// Floyd's algorithm: m distinct values from [0, n), returned sorted.
std::vector<uint64_t> SampleDistinct(uint64_t n, uint64_t m, Rng &rng) {
  std::unordered_set<uint64_t> chosen;
  chosen.reserve(m * 2);
  for (uint64_t j = n - m; j < n; ++j) {
    uint64_t t = rng.Index(j + 1);
    if (!chosen.insert(t).second) chosen.insert(j);
  }
  std::vector<uint64_t> out(chosen.begin(), chosen.end());
  std::sort(out.begin(), out.end());
  return out;
}

AbxCell BuildCell(const CellKey &key, const std::vector<Group> &groups,
                  const SamplingCaps &caps, uint64_t seed) {
  AbxCell cell;
  cell.key = key;
  std::vector<uint64_t> prefix(groups.size() + 1, 0);
  for (size_t g = 0; g < groups.size(); ++g)
    prefix[g + 1] = prefix[g] + static_cast<uint64_t>(groups[g].a.size()) * groups[g].b.size();
  cell.population = prefix.back();
  if (cell.population == 0) return cell;

  auto at = [&](uint64_t r) {
    size_t g = std::upper_bound(prefix.begin(), prefix.end(), r) - prefix.begin() - 1;
    uint64_t off = r - prefix[g];
    const Group &grp = groups[g];
    return Triplet{grp.a[off / grp.b.size()], grp.b[off % grp.b.size()], grp.x};
  };
  if (cell.population <= caps.max_per_cell) {
    cell.triplets.reserve(cell.population);
    for (uint64_t r = 0; r < cell.population; ++r) cell.triplets.push_back(at(r));
  } else {
    std::string joined;
    for (const std::string &k : key) joined += k + '\x1f';
    Rng rng(DeriveSeed(seed, joined));
    for (uint64_t r : SampleDistinct(cell.population, caps.max_per_cell, rng))
      cell.triplets.push_back(at(r));
  }
  return cell;
}

}  // namespace

Enumeration EnumerateTriplets(const AbxCondition &condition, const SegmentPool &pool,
                              const SamplingCaps &caps, uint64_t seed,
                              const std::vector<CellKey> *requested) {
  if (caps.max_per_cell == 0) throw ConfigError("max_per_cell must be positive");
  if (pool.GetTier() != condition.SegmentTier())
    throw DataError(condition.Name() + " ABX needs " +
                    (condition.SegmentTier() == Tier::kWord ? "word" : "phone") + " segments");
  CellIndex index(condition, pool, caps);
  std::vector<CellKey> keys = requested ? *requested : index.CandidateKeys();
  Enumeration out;
  for (const CellKey &key : keys) {
    AbxCell cell = BuildCell(key, index.Groups(key), caps, seed);
    if (cell.triplets.empty())
      out.dropped.push_back(key);
    else
      out.cells.push_back(std::move(cell));
  }
  return out;
}

std::vector<std::string> CheckTriplet(const AbxCondition &condition, const SegmentPool &pool,
                                      const AbxCell &cell, const Triplet &t,
                                      const SamplingCaps &caps) {
  std::vector<std::string> v;
  if (t.a >= pool.Size() || t.b >= pool.Size() || t.x >= pool.Size()) {
    v.push_back("index out of range");
    return v;
  }
  const PoolItem &a = pool[t.a], &b = pool[t.b], &x = pool[t.x];
  if (t.a == t.x || t.b == t.x || t.a == t.b) v.push_back("a, b, x are not distinct tokens");

  std::string on = CategoryName(condition.On());
  if (CategoryValue(a, condition.On()) != CategoryValue(x, condition.On()))
    v.push_back("a and x differ on " + on);
  if (CategoryValue(b, condition.On()) == CategoryValue(x, condition.On()))
    v.push_back("b and x agree on " + on);
  for (AbxCategory c : condition.By()) {
    std::string va = CategoryValue(a, c), vb = CategoryValue(b, c), vx = CategoryValue(x, c);
    if (va != vx || vb != vx) v.push_back("by " + CategoryName(c) + " not constant");
  }
  for (AbxCategory c : condition.Across()) {
    std::string va = CategoryValue(a, c), vb = CategoryValue(b, c), vx = CategoryValue(x, c);
    if (va == vx || vb == vx) v.push_back("across " + CategoryName(c) + ": shared with x");
    if (!condition.AbSameSpeaker() && va == vb)
      v.push_back("across " + CategoryName(c) + ": a and b shared");
  }
  if (condition.AbSameSpeaker() && a.speaker != b.speaker)
    v.push_back("a and b come from different speakers");
  for (const PoolItem *p : {&a, &b, &x})
    if (p->utterance_index < caps.min_utterance_index)
      v.push_back("utterance " + p->segment.utt_id + " is below the index floor");

  CellKey expect = {CategoryValue(x, condition.On()), CategoryValue(b, condition.On())};
  for (std::string &s : ByKeyParts(condition, x)) expect.push_back(std::move(s));
  if (expect != cell.key)
    v.push_back("triplet belongs to cell " + FormatCellKey(expect) + ", not " +
                FormatCellKey(cell.key));
  return v;
}

}  // namespace dsrt
