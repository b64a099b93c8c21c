// src/corpus/side-inputs.cc

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

#include <cmath>
#include <fstream>

#include <json.hpp>

#include "dsrt/corpus.h"
#include "dsrt/error.h"

namespace dsrt {

using nlohmann::json;

namespace {

// Calls fn(obj, line_no) for every non-blank JSON Lines record.
template <typename Fn>
void ForEachJsonLine(const std::filesystem::path &path, Fn fn) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json obj;
    try {
      obj = json::parse(line);
    } catch (const json::parse_error &e) {
      throw DataError(path.string() + ":" + std::to_string(line_no) + ": invalid JSON");
    }
    if (!obj.is_object())
      throw DataError(path.string() + ":" + std::to_string(line_no) + ": expected an object");
    fn(obj, line_no);
  }
}

std::string Where(const std::filesystem::path &path, size_t line) {
  return path.string() + ":" + std::to_string(line);
}

}  // namespace

EmbeddingTable EmbeddingTable::FromMap(std::map<std::string, std::vector<float>> vectors) {
  EmbeddingTable t;
  for (const auto &[utt, vec] : vectors) {
    if (vec.empty()) throw DataError("empty embedding for " + utt);
    if (t.dim_ == 0) t.dim_ = vec.size();
    if (vec.size() != t.dim_)
      throw DataError("embedding for " + utt + " has dimension " + std::to_string(vec.size()) +
                      ", expected " + std::to_string(t.dim_));
    for (float v : vec)
      if (!std::isfinite(v)) throw DataError("non-finite embedding value for " + utt);
  }
  t.vectors_ = std::move(vectors);
  return t;
}

EmbeddingTable EmbeddingTable::Load(const std::filesystem::path &path) {
  std::map<std::string, std::vector<float>> vectors;
  if (std::filesystem::is_directory(path)) {
    for (const auto &entry : std::filesystem::directory_iterator(path)) {
      if (entry.path().extension() != ".ftr") continue;
      FeatureSequence seq = ReadFeatureFile(entry.path());
      if (seq.NumFrames() != 1)
        throw DataError(entry.path().string() + ": embedding FTR must have exactly one row");
      vectors[entry.path().stem().string()] = seq.frames.Data();
    }
  } else {
    ForEachJsonLine(path, [&](const json &obj, size_t line) {
      if (!obj.contains("utt_id") || !obj["utt_id"].is_string())
        throw DataError(Where(path, line) + ": missing string field 'utt_id'");
      if (!obj.contains("vector") || !obj["vector"].is_array())
        throw DataError(Where(path, line) + ": missing array field 'vector'");
      std::string utt = obj["utt_id"].get<std::string>();
      std::vector<float> vec;
      for (const auto &v : obj["vector"]) {
        if (!v.is_number()) throw DataError(Where(path, line) + ": non-numeric vector entry");
        vec.push_back(v.get<float>());
      }
      if (!vectors.emplace(utt, std::move(vec)).second)
        throw DataError(Where(path, line) + ": duplicate utt_id '" + utt + "'");
    });
  }
  try {
    return FromMap(std::move(vectors));
  } catch (const DataError &e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

const std::vector<float> *EmbeddingTable::Find(const std::string &utt_id) const {
  auto it = vectors_.find(utt_id);
  return it == vectors_.end() ? nullptr : &it->second;
}

void ValidatePpg(const FeatureSequence &ppg, double tol) {
  ppg.Validate();
  for (size_t t = 0; t < ppg.NumFrames(); ++t) {
    double sum = 0.0;
    for (float v : ppg.frames.Row(t)) {
      if (v < 0.0f) throw DataError("PPG frame " + std::to_string(t) + " has a negative entry");
      sum += v;
    }
    if (std::abs(sum - 1.0) > tol)
      throw DataError("PPG frame " + std::to_string(t) + " sums to " + std::to_string(sum));
  }
}

bool PpgStore::Has(const std::string &utt_id) const {
  return std::filesystem::exists(dir_ / (utt_id + ".ftr"));
}

FeatureSequence PpgStore::Read(const std::string &utt_id) const {
  auto path = dir_ / (utt_id + ".ftr");
  FeatureSequence seq = ReadFeatureFile(path);
  try {
    ValidatePpg(seq);
  } catch (const DataError &e) {
    throw DataError(path.string() + ": " + e.what());
  }
  return seq;
}

std::map<std::string, std::string> LoadTranscripts(const std::filesystem::path &path) {
  std::map<std::string, std::string> out;
  ForEachJsonLine(path, [&](const json &obj, size_t line) {
    if (!obj.contains("utt_id") || !obj["utt_id"].is_string())
      throw DataError(Where(path, line) + ": missing string field 'utt_id'");
    if (!obj.contains("text") || !obj["text"].is_string())
      throw DataError(Where(path, line) + ": missing string field 'text'");
    std::string utt = obj["utt_id"].get<std::string>();
    if (!out.emplace(utt, obj["text"].get<std::string>()).second)
      throw DataError(Where(path, line) + ": duplicate utt_id '" + utt + "'");
  });
  return out;
}

}  // namespace dsrt
