// src/quantizer/codebook-io.cc

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

#include <cstring>

#include "dsrt/error.h"
#include "dsrt/io-util.h"
#include "dsrt/quantizer.h"

namespace dsrt {

namespace {
constexpr char kCodebookMagic[4] = {'V', 'Q', 'C', 'B'};
}

std::vector<unsigned char> EncodeCodebook(const Codebook &cb) {
  const size_t k = cb.Size(), d = cb.Dim();
  if (k < 2 || d < 1) throw DataError("codebook must have K >= 2 and D >= 1");
  if (cb.ema_counts.size() != k || cb.ema_sums.NumRows() != k || cb.ema_sums.NumCols() != d)
    throw DataError("codebook EMA state does not match centroid shape");
  ByteWriter w;
  w.Raw(kCodebookMagic, 4);
  w.U32(static_cast<uint32_t>(k));
  w.U32(static_cast<uint32_t>(d));
  for (float v : cb.centroids.Data()) w.F32(v);
  for (float v : cb.ema_counts) w.F32(v);
  for (float v : cb.ema_sums.Data()) w.F32(v);
  return w.Take();
}

Codebook DecodeCodebook(const std::vector<unsigned char> &bytes, const std::string &what) {
  if (bytes.size() < 12) throw DataError(what + ": truncated codebook header");
  if (std::memcmp(bytes.data(), kCodebookMagic, 4) != 0)
    throw DataError(what + ": bad codebook magic");
  ByteReader r(bytes, what);
  r.Skip(4);
  uint64_t k = r.U32(), d = r.U32();
  if (k < 2 || d < 1) throw DataError(what + ": codebook must have K >= 2 and D >= 1");
  uint64_t expected = (k * d * 2 + k) * 4;
  if (r.Remaining() < expected) throw DataError(what + ": truncated codebook payload");
  if (r.Remaining() > expected) throw DataError(what + ": trailing data after codebook payload");
  Codebook cb;
  std::vector<float> centroids(k * d), sums(k * d);
  cb.ema_counts.resize(k);
  for (auto &v : centroids) v = r.F32();
  for (auto &v : cb.ema_counts) v = r.F32();
  for (auto &v : sums) v = r.F32();
  cb.centroids = Matrix(k, d, std::move(centroids));
  cb.ema_sums = Matrix(k, d, std::move(sums));
  if (!cb.centroids.AllFinite()) throw DataError(what + ": non-finite centroid values");
  return cb;
}

void SaveCodebook(const Codebook &codebook, const std::filesystem::path &path) {
  WriteFileBytes(path, EncodeCodebook(codebook));
}

Codebook LoadCodebook(const std::filesystem::path &path) {
  return DecodeCodebook(ReadFileBytes(path), path.string());
}

}  // namespace dsrt
