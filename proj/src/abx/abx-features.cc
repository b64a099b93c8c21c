// src/abx/abx-features.cc

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

#include <map>

#include "dsrt/abx.h"
#include "dsrt/error.h"
#include "dsrt/parallel.h"

namespace dsrt {

Representation ContinuousRepresentation(const Manifest &manifest) {
  Representation r;
  r.name = "continuous";
  r.locate = [base = manifest.BaseDir()](const UtteranceRecord &rec) {
    std::filesystem::path p(rec.feature_path);
    return p.is_absolute() || base.empty() ? p : base / p;
  };
  return r;
}

Representation DirectoryRepresentation(std::filesystem::path dir, std::string name) {
  Representation r;
  r.name = std::move(name);
  r.locate = [dir = std::move(dir)](const UtteranceRecord &rec) {
    return dir / (rec.utt_id + ".ftr");
  };
  return r;
}

Representation TokenRepresentation(Representation base, std::shared_ptr<const Codebook> codebook,
                                   TokenEmbedding embedding) {
  if (!codebook) throw ConfigError("token representation needs a codebook");
  Representation r;
  r.name = base.name + (embedding == TokenEmbedding::kCentroid ? "+centroid" : "+one_hot");
  r.locate = std::move(base.locate);
  FrameTransform inner = std::move(base.transform);
  r.transform = [inner, codebook, embedding](const FeatureSequence &seq) {
    FeatureSequence in = inner ? inner(seq) : seq;
    return TokensToVectors(Quantize(in, *codebook, 1), *codebook, embedding);
  };
  return r;
}

SegmentFeatures SegmentFeatures::Load(const SegmentPool &pool, const Manifest &manifest,
                                      const Representation &repr, int workers,
                                      const std::vector<bool> *needed) {
  if (needed && needed->size() != pool.Size())
    throw Error("SegmentFeatures::Load: mask size does not match pool");
  std::map<std::string, std::vector<size_t>> by_utt;
  for (size_t i = 0; i < pool.Size(); ++i)
    if (!needed || (*needed)[i]) by_utt[pool[i].segment.utt_id].push_back(i);
  std::vector<const std::vector<size_t> *> jobs;
  std::vector<const UtteranceRecord *> records;
  for (const auto &[utt, items] : by_utt) {
    const UtteranceRecord *rec = manifest.Find(utt);
    if (!rec) throw DataError("segment refers to unknown utterance " + utt);
    jobs.push_back(&items);
    records.push_back(rec);
  }

  SegmentFeatures out;
  out.segments_.resize(pool.Size());
  std::vector<float> rates(jobs.size());
  std::vector<size_t> dims(jobs.size());
  ParallelFor(jobs.size(), workers, [&](size_t begin, size_t end) {
    for (size_t j = begin; j < end; ++j) {
      FeatureSequence seq = ReadFeatureFile(repr.locate(*records[j]));
      rates[j] = seq.frame_rate_hz;
      dims[j] = seq.Dim();
      for (size_t i : *jobs[j]) {
        FeatureSequence slice = SliceSegment(seq, pool[i].segment);
        if (repr.transform) slice = repr.transform(slice);
        out.segments_[i] = std::move(slice.frames);
      }
    }
  });
  for (size_t j = 1; j < jobs.size(); ++j) {
    if (rates[j] != rates[0])
      throw DataError("frame rate of " + records[j]->utt_id + " (" + std::to_string(rates[j]) +
                      " Hz) differs from " + records[0]->utt_id + " (" +
                      std::to_string(rates[0]) + " Hz)");
    if (dims[j] != dims[0])
      throw DataError("feature dimension of " + records[j]->utt_id + " differs from " +
                      records[0]->utt_id);
  }
  return out;
}

SegmentFeatures SegmentFeatures::FromMatrices(std::vector<Matrix> segments) {
  SegmentFeatures out;
  out.segments_.reserve(segments.size());
  for (Matrix &m : segments) out.segments_.emplace_back(std::move(m));
  return out;
}

const Matrix &SegmentFeatures::Get(size_t i) const {
  if (i >= segments_.size() || !segments_[i])
    throw DataError("segment " + std::to_string(i) + " has no features");
  return *segments_[i];
}

}  // namespace dsrt
