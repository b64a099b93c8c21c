// include/dsrt/quantizer.h

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

#ifndef DSRT_QUANTIZER_H_
#define DSRT_QUANTIZER_H_

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "dsrt/corpus.h"
#include "dsrt/matrix.h"

namespace dsrt {

struct TrainConfig {
  uint64_t seed = 42;
  double decay = 0.99;
  double epsilon = 1e-5;
  size_t max_frames = 2000000;
  int epochs = 50;
  // Stop once an epoch lowers the mean squared error by less than this.
  double early_stop_tol = 1e-6;
  // Codes whose EMA count falls below this fraction of the uniform share
  // are re-seeded from training frames.
  double dead_code_fraction = 0.01;
  int workers = 0;
};

// K x D centroids with the EMA statistics that produced them.
struct Codebook {
  Matrix centroids;
  std::vector<float> ema_counts;
  Matrix ema_sums;
  double decay = 0.99;
  double epsilon = 1e-5;

  size_t Size() const { return centroids.NumRows(); }
  size_t Dim() const { return centroids.NumCols(); }
};

struct TrainLog {
  // Mean squared quantization error of the initial codebook followed by
  // the error after every completed epoch.
  std::vector<double> errors;
  // Number of codes re-seeded after each epoch (0 when none, or when the
  // re-seeding would have raised the error and was rolled back).
  std::vector<size_t> reseeded;
  size_t frames_used = 0;
  bool early_stopped = false;
};

// EMA k-means: k-means++ seeding, then per epoch a full assignment pass
// followed by
//   counts_k <- decay*counts_k + (1-decay)*|A_k|
//   sums_k   <- decay*sums_k   + (1-decay)*sum_{x in A_k} x
//   centroid_k <- sums_k / n_k,  n_k = (counts_k + eps)/(sum counts + K*eps) * sum counts
// Deterministic in config.seed and independent of config.workers.
Codebook TrainCodebook(std::span<const FeatureSequence> data, size_t codebook_size,
                       const TrainConfig &config, TrainLog *log = nullptr);

struct TokenSequence {
  std::vector<int32_t> tokens;
  size_t codebook_size = 0;
  float frame_rate_hz = 0.0f;
};

// Nearest centroid per frame (squared Euclidean), lowest index on ties.
TokenSequence Quantize(const FeatureSequence &seq, const Codebook &codebook, int workers = 1);
size_t NearestCentroid(std::span<const float> frame, const Matrix &centroids,
                       double *squared_distance = nullptr);

enum class TokenEmbedding { kCentroid, kOneHot };

// Row t is centroid[tokens[t]] (kCentroid) or the one-hot vector of
// tokens[t] (kOneHot).  Frame rate is preserved.
FeatureSequence TokensToVectors(const TokenSequence &tokens, const Codebook &codebook,
                                TokenEmbedding embedding = TokenEmbedding::kCentroid);

// Mean over frames of the squared distance to the nearest centroid.
double MeanQuantizationError(std::span<const FeatureSequence> data, const Codebook &codebook,
                             int workers = 1);

// "VQCB", u32 K, u32 D, K*D f32 centroids, K f32 counts, K*D f32 sums.
std::vector<unsigned char> EncodeCodebook(const Codebook &codebook);
Codebook DecodeCodebook(const std::vector<unsigned char> &bytes,
                        const std::string &what = "<memory>");
void SaveCodebook(const Codebook &codebook, const std::filesystem::path &path);
Codebook LoadCodebook(const std::filesystem::path &path);

}  // namespace dsrt

#endif  // DSRT_QUANTIZER_H_
