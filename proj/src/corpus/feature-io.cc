// src/corpus/feature-io.cc

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

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>

#include "dsrt/corpus.h"
#include "dsrt/error.h"
#include "dsrt/io-util.h"

namespace dsrt {

void FeatureSequence::Validate() const {
  if (frames.NumRows() < 1) throw DataError("feature sequence has no frames");
  if (frames.NumCols() < 1) throw DataError("feature sequence has zero dimension");
  if (!(frame_rate_hz > 0.0f) || !std::isfinite(frame_rate_hz))
    throw DataError("frame rate must be positive and finite");
  if (!frames.AllFinite()) throw DataError("feature sequence contains non-finite values");
}

namespace {
constexpr char kFtrMagic[4] = {'F', 'T', 'R', '1'};
constexpr size_t kFtrHeaderBytes = 16;
}  // namespace

std::vector<unsigned char> EncodeFeatures(const FeatureSequence &seq) {
  seq.Validate();
  ByteWriter w;
  w.Raw(kFtrMagic, 4);
  w.U32(static_cast<uint32_t>(seq.NumFrames()));
  w.U32(static_cast<uint32_t>(seq.Dim()));
  w.F32(seq.frame_rate_hz);
  for (float v : seq.frames.Data()) w.F32(v);
  return w.Take();
}

FeatureSequence DecodeFeatures(const std::vector<unsigned char> &bytes, const std::string &what) {
  if (bytes.size() < kFtrHeaderBytes)
    throw DataError(what + ": truncated FTR header (" + std::to_string(bytes.size()) + " bytes)");
  if (std::memcmp(bytes.data(), kFtrMagic, 4) != 0) throw DataError(what + ": bad FTR magic");
  ByteReader r(bytes, what);
  r.Skip(4);
  uint64_t rows = r.U32(), cols = r.U32();
  float rate = r.F32();
  uint64_t payload = rows * cols * 4;
  uint64_t available = bytes.size() - kFtrHeaderBytes;
  if (available < payload)
    throw DataError(what + ": truncated FTR payload (header declares " + std::to_string(rows) +
                    "x" + std::to_string(cols) + ", expected " + std::to_string(payload) +
                    " bytes, found " + std::to_string(available) + ")");
  if (available > payload)
    throw DataError(what + ": " + std::to_string(available - payload) +
                    " bytes of trailing data after FTR payload");
  std::vector<float> data(rows * cols);
  for (auto &v : data) v = r.F32();
  FeatureSequence seq{Matrix(rows, cols, std::move(data)), rate};
  try {
    seq.Validate();
  } catch (const DataError &e) {
    throw DataError(what + ": " + e.what());
  }
  return seq;
}

FeatureSequence ReadFeatureFile(const std::filesystem::path &path) {
  return DecodeFeatures(ReadFileBytes(path), path.string());
}

void WriteFeatureFile(const std::filesystem::path &path, const FeatureSequence &seq) {
  WriteFileBytes(path, EncodeFeatures(seq));
}

}  // namespace dsrt
