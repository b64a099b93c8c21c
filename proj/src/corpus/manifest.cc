// src/corpus/manifest.cc

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
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "dsrt/corpus.h"
#include "dsrt/error.h"

namespace dsrt {

using nlohmann::json;

std::string SplitName(Split split) { return split == Split::kTrain ? "train" : "test"; }

Split ParseSplit(const std::string &name) {
  if (name == "train") return Split::kTrain;
  if (name == "test") return Split::kTest;
  throw DataError("unknown split '" + name + "' (expected train or test)");
}

namespace {

std::string Describe(const UtteranceRecord &r) {
  return "utt_id=" + r.utt_id + " speaker_id=" + r.speaker_id;
}

std::string RequireString(const json &obj, const char *field, size_t line) {
  auto it = obj.find(field);
  if (it == obj.end())
    throw DataError("manifest line " + std::to_string(line) + ": missing field '" +
                    field + "'");
  if (!it->is_string())
    throw DataError("manifest line " + std::to_string(line) + ": field '" + field +
                    "' must be a string");
  return it->get<std::string>();
}

std::optional<std::string> OptionalString(const json &obj, const char *field, size_t line) {
  auto it = obj.find(field);
  if (it == obj.end() || it->is_null()) return std::nullopt;
  if (!it->is_string())
    throw DataError("manifest line " + std::to_string(line) + ": field '" + field +
                    "' must be a string or null");
  return it->get<std::string>();
}

const std::set<std::string> &ManifestFields() {
  static const std::set<std::string> fields{
      "utt_id", "speaker_id", "accent_region", "split", "text", "feature_path",
      "word_alignment_path", "phone_alignment_path", "utterance_index"};
  return fields;
}

}  // namespace

Manifest Manifest::FromRecords(std::vector<UtteranceRecord> records,
                               std::filesystem::path base_dir) {
  if (records.empty()) throw DataError("empty manifest");
  Manifest m;
  m.base_dir_ = std::move(base_dir);
  m.records_ = std::move(records);
  const auto &known = KnownAccentRegions();
  std::set<std::string> unknown_regions;
  for (size_t i = 0; i < m.records_.size(); ++i) {
    const UtteranceRecord &r = m.records_[i];
    if (r.utt_id.empty()) throw DataError("manifest record " + std::to_string(i) + ": empty utt_id");
    if (r.speaker_id.empty()) throw DataError("empty speaker_id in " + Describe(r));
    if (r.accent_region.empty()) throw DataError("empty accent_region in " + Describe(r));
    if (r.utterance_index < 0) throw DataError("negative utterance_index in " + Describe(r));
    if (!m.by_utt_.emplace(r.utt_id, i).second)
      throw DataError("duplicate utt_id '" + r.utt_id + "'");
    auto [acc_it, acc_new] = m.speaker_accent_.emplace(r.speaker_id, r.accent_region);
    if (!acc_new && acc_it->second != r.accent_region)
      throw DataError("speaker '" + r.speaker_id + "' mapped to two accents (" +
                      acc_it->second + ", " + r.accent_region + ") at " + Describe(r));
    auto [split_it, split_new] = m.speaker_split_.emplace(r.speaker_id, r.split);
    if (!split_new && split_it->second != r.split)
      throw DataError("speaker '" + r.speaker_id + "' listed in both train and test at " +
                      Describe(r));
    if (!m.by_speaker_index_.emplace(std::make_pair(r.speaker_id, r.utterance_index), i).second)
      throw DataError("speaker '" + r.speaker_id + "' has two records with utterance_index " +
                      std::to_string(r.utterance_index) + " at " + Describe(r));
    if (std::find(known.begin(), known.end(), r.accent_region) == known.end())
      unknown_regions.insert(r.accent_region);
  }
  for (const auto &region : unknown_regions)
    m.warnings_.push_back("accent region '" + region + "' is not one of the known regions");

  // Indices must be dense per speaker: {0..n-1}.
  std::map<std::string, std::vector<int64_t>> indices;
  for (const auto &r : m.records_) indices[r.speaker_id].push_back(r.utterance_index);
  for (auto &[speaker, idx] : indices) {
    std::sort(idx.begin(), idx.end());
    if (idx.back() != static_cast<int64_t>(idx.size()) - 1)
      m.warnings_.push_back("speaker '" + speaker + "' has gaps in utterance_index (" +
                            std::to_string(idx.size()) + " records, max index " +
                            std::to_string(idx.back()) + ")");
  }
  return m;
}

const UtteranceRecord *Manifest::Find(const std::string &utt_id) const {
  auto it = by_utt_.find(utt_id);
  return it == by_utt_.end() ? nullptr : &records_[it->second];
}

const UtteranceRecord *Manifest::FindBySpeakerIndex(const std::string &speaker_id,
                                                    int64_t index) const {
  auto it = by_speaker_index_.find({speaker_id, index});
  return it == by_speaker_index_.end() ? nullptr : &records_[it->second];
}

std::vector<std::string> Manifest::Speakers() const {
  std::vector<std::string> out;
  for (const auto &[s, a] : speaker_accent_) out.push_back(s);
  return out;
}

std::vector<std::string> Manifest::Regions() const {
  std::set<std::string> regions;
  for (const auto &[s, a] : speaker_accent_) regions.insert(a);
  return {regions.begin(), regions.end()};
}

Manifest Manifest::FilterSplit(Split split) const {
  std::vector<UtteranceRecord> kept;
  for (const auto &r : records_)
    if (r.split == split) kept.push_back(r);
  if (kept.empty()) throw DataError("manifest has no " + SplitName(split) + " utterances");
  return FromRecords(std::move(kept), base_dir_);
}

std::filesystem::path Manifest::ResolvePath(const std::string &path) const {
  std::filesystem::path p(path);
  if (p.is_absolute() || base_dir_.empty()) return p;
  return base_dir_ / p;
}

Manifest LoadManifest(const std::filesystem::path &path,
                      const std::filesystem::path &feature_root) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open manifest " + path.string());
  std::vector<UtteranceRecord> records;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json obj;
    try {
      obj = json::parse(line);
    } catch (const json::parse_error &e) {
      throw DataError("manifest line " + std::to_string(line_no) + ": invalid JSON: " + e.what());
    }
    if (!obj.is_object())
      throw DataError("manifest line " + std::to_string(line_no) + ": expected an object");
    for (const auto &[key, value] : obj.items())
      if (!ManifestFields().count(key))
        throw DataError("manifest line " + std::to_string(line_no) + ": unknown field '" +
                        key + "'");
    UtteranceRecord r;
    r.utt_id = RequireString(obj, "utt_id", line_no);
    r.speaker_id = RequireString(obj, "speaker_id", line_no);
    r.accent_region = RequireString(obj, "accent_region", line_no);
    r.split = ParseSplit(RequireString(obj, "split", line_no));
    r.text = RequireString(obj, "text", line_no);
    r.feature_path = RequireString(obj, "feature_path", line_no);
    r.word_alignment_path = OptionalString(obj, "word_alignment_path", line_no);
    r.phone_alignment_path = OptionalString(obj, "phone_alignment_path", line_no);
    auto idx = obj.find("utterance_index");
    if (idx == obj.end())
      throw DataError("manifest line " + std::to_string(line_no) +
                      ": missing field 'utterance_index'");
    if (!idx->is_number_integer())
      throw DataError("manifest line " + std::to_string(line_no) +
                      ": field 'utterance_index' must be an integer");
    r.utterance_index = idx->get<int64_t>();
    records.push_back(std::move(r));
  }
  std::filesystem::path base = feature_root.empty() ? path.parent_path() : feature_root;
  return Manifest::FromRecords(std::move(records), base);
}

void WriteManifest(const std::filesystem::path &path,
                   const std::vector<UtteranceRecord> &records) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write manifest " + path.string());
  for (const auto &r : records) {
    json obj;
    obj["utt_id"] = r.utt_id;
    obj["speaker_id"] = r.speaker_id;
    obj["accent_region"] = r.accent_region;
    obj["split"] = SplitName(r.split);
    obj["text"] = r.text;
    obj["feature_path"] = r.feature_path;
    obj["word_alignment_path"] =
        r.word_alignment_path ? json(*r.word_alignment_path) : json(nullptr);
    obj["phone_alignment_path"] =
        r.phone_alignment_path ? json(*r.phone_alignment_path) : json(nullptr);
    obj["utterance_index"] = r.utterance_index;
    out << obj.dump() << '\n';
  }
}

}  // namespace dsrt
