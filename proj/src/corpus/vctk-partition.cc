// src/corpus/vctk-partition.cc

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

// Accent regions and train/test split of the VCTK speakers.

#include <map>

#include "dsrt/corpus.h"

namespace dsrt {

const std::vector<std::string> &KnownAccentRegions() {
  static const std::vector<std::string> regions{
      "SouthernEnglish", "NorthernEnglish",   "Scottish",        "Irish",
      "Canadian",        "AmericanNortheast", "AmericanMidwest", "AmericanSouth",
      "AmericanWest",    "NorthernIrish",     "SouthAfrican",    "Indian",
      "Oceanian"};
  return regions;
}

namespace {

struct PartitionRow {
  const char *region;
  Split split;
  std::vector<const char *> speakers;
};

const std::map<std::string, VctkSpeakerInfo> &PartitionTable() {
  static const std::map<std::string, VctkSpeakerInfo> table = [] {
    const std::vector<PartitionRow> rows = {
        {"SouthernEnglish", Split::kTrain,
         {"p225", "p226", "p228", "p229", "p231", "p232", "p239", "p240", "p243", "p250",
          "p254", "p257", "p258"}},
        {"SouthernEnglish", Split::kTest, {"p268", "p273", "p274", "p276"}},
        {"NorthernEnglish", Split::kTrain,
         {"p227", "p230", "p233", "p236", "p244", "p256", "p259", "p267", "p269", "p270",
          "p278", "p279"}},
        {"NorthernEnglish", Split::kTest, {"p277", "p282", "p286", "p287"}},
        {"Scottish", Split::kTrain,
         {"p234", "p237", "p241", "p246", "p247", "p249", "p252", "p255", "p260", "p262",
          "p263", "p271", "p272", "p275", "p281"}},
        {"Scottish", Split::kTest, {"p264", "p265", "p284", "p285"}},
        {"Irish", Split::kTrain, {"p245", "p266", "p283", "p288", "p295"}},
        {"Irish", Split::kTest, {"p298", "p313", "p340", "p364"}},
        {"Canadian", Split::kTest, {"p316", "p317", "p343", "p363"}},
        {"AmericanNortheast", Split::kTest, {"p315", "p339", "p360", "p361"}},
        {"AmericanMidwest", Split::kTest, {"p311", "p333", "p334", "p341"}},
        {"AmericanSouth", Split::kTest, {"p301", "p308", "p310", "p345"}},
        {"AmericanWest", Split::kTest, {"p294", "p299", "p300", "p318"}},
        {"NorthernIrish", Split::kTest, {"p292", "p293", "p304", "p351"}},
        {"SouthAfrican", Split::kTest, {"p314", "p323", "p336", "p347"}},
        {"Indian", Split::kTest, {"p248", "p251", "p376"}},
        {"Oceanian", Split::kTest, {"p326", "p335", "p374"}},
    };
    std::map<std::string, VctkSpeakerInfo> t;
    for (const auto &row : rows)
      for (const char *spk : row.speakers) t[spk] = {row.region, row.split};
    return t;
  }();
  return table;
}

}  // namespace

std::optional<VctkSpeakerInfo> LookupVctkSpeaker(const std::string &speaker_id) {
  const auto &table = PartitionTable();
  auto it = table.find(speaker_id);
  if (it == table.end()) return std::nullopt;
  return it->second;
}

std::vector<std::string> CheckAgainstVctkPartition(const Manifest &manifest) {
  std::vector<std::string> issues;
  for (const auto &[speaker, region] : manifest.SpeakerAccent()) {
    auto info = LookupVctkSpeaker(speaker);
    if (!info) continue;
    if (info->accent_region != region)
      issues.push_back("speaker " + speaker + " is " + info->accent_region +
                       " in the reference partition, manifest says " + region);
    Split split = manifest.SpeakerSplit().at(speaker);
    if (info->split != split)
      issues.push_back("speaker " + speaker + " is " + SplitName(info->split) +
                       " in the reference partition, manifest says " + SplitName(split));
  }
  return issues;
}

}  // namespace dsrt
