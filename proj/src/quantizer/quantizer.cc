// src/quantizer/quantizer.cc

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

#include "dsrt/quantizer.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "dsrt/error.h"
#include "dsrt/kernels.h"
#include "dsrt/parallel.h"
#include "dsrt/rng.h"

namespace dsrt {

size_t NearestCentroid(std::span<const float> frame, const Matrix &centroids,
                       double *squared_distance) {
  if (frame.size() != centroids.NumCols())
    throw DataError("frame dimension " + std::to_string(frame.size()) +
                    " does not match codebook dimension " + std::to_string(centroids.NumCols()));
  const auto &k = kernels::Active();
  size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (size_t c = 0; c < centroids.NumRows(); ++c) {
    double d = k.squared_distance(frame.data(), centroids.Row(c).data(), frame.size());
    if (d < best_d) {
      best_d = d;
      best = c;
    }
  }
  if (squared_distance) *squared_distance = best_d;
  return best;
}

TokenSequence Quantize(const FeatureSequence &seq, const Codebook &codebook, int workers) {
  if (seq.Dim() != codebook.Dim())
    throw DataError("feature dimension " + std::to_string(seq.Dim()) +
                    " does not match codebook dimension " + std::to_string(codebook.Dim()));
  TokenSequence out;
  out.codebook_size = codebook.Size();
  out.frame_rate_hz = seq.frame_rate_hz;
  out.tokens.resize(seq.NumFrames());
  ParallelFor(seq.NumFrames(), workers, [&](size_t begin, size_t end) {
    for (size_t t = begin; t < end; ++t)
      out.tokens[t] = static_cast<int32_t>(NearestCentroid(seq.frames.Row(t), codebook.centroids));
  });
  return out;
}

FeatureSequence TokensToVectors(const TokenSequence &tokens, const Codebook &codebook,
                                TokenEmbedding embedding) {
  const size_t k = codebook.Size();
  const size_t dim = embedding == TokenEmbedding::kCentroid ? codebook.Dim() : k;
  Matrix out(tokens.tokens.size(), dim);
  for (size_t t = 0; t < tokens.tokens.size(); ++t) {
    int32_t tok = tokens.tokens[t];
    if (tok < 0 || static_cast<size_t>(tok) >= k)
      throw DataError("token " + std::to_string(tok) + " out of range for codebook of size " +
                      std::to_string(k));
    if (embedding == TokenEmbedding::kCentroid) {
      auto src = codebook.centroids.Row(tok);
      std::copy(src.begin(), src.end(), out.Row(t).begin());
    } else {
      out(t, tok) = 1.0f;
    }
  }
  return {std::move(out), tokens.frame_rate_hz};
}

double MeanQuantizationError(std::span<const FeatureSequence> data, const Codebook &codebook,
                             int workers) {
  double total = 0.0;
  size_t frames = 0;
  for (const auto &seq : data) {
    std::vector<double> dist(seq.NumFrames());
    ParallelFor(seq.NumFrames(), workers, [&](size_t begin, size_t end) {
      for (size_t t = begin; t < end; ++t)
        NearestCentroid(seq.frames.Row(t), codebook.centroids, &dist[t]);
    });
    for (double d : dist) total += d;
    frames += seq.NumFrames();
  }
  if (frames == 0) throw DataError("no frames to measure quantization error on");
  return total / static_cast<double>(frames);
}

namespace {

// Training state kept in double; centroids are the float copies that
// assignment (and later quantization) actually uses.
class EmaTrainer {
 public:
  EmaTrainer(std::vector<const float *> frames, size_t dim, size_t k, const TrainConfig &config)
      : frames_(std::move(frames)), dim_(dim), k_(k), config_(config),
        centroids_(k, dim), counts_(k, 0.0), sums_(k * dim, 0.0),
        assign_(frames_.size()), dist_(frames_.size()) {}

  void SeedPlusPlus(Rng &rng);
  // Assigns every frame to its nearest centroid; returns the mean error.
  double Assign();
  void EmaUpdate();
  // Re-seeds dead codes; keeps the change only if the error does not rise.
  // `error` is the current mean error and is updated on acceptance.
  size_t ReseedDeadCodes(Rng &rng, double *error);
  Codebook Finish() const;

 private:
  void RecomputeCentroids();
  std::span<const float> Frame(size_t i) const { return {frames_[i], dim_}; }

  std::vector<const float *> frames_;
  size_t dim_, k_;
  TrainConfig config_;
  Matrix centroids_;
  std::vector<double> counts_, sums_;
  std::vector<uint32_t> assign_;
  std::vector<double> dist_;
};

void EmaTrainer::SeedPlusPlus(Rng &rng) {
  const size_t n = frames_.size();
  const auto &kern = kernels::Active();
  std::vector<double> min_d2(n);
  size_t first = rng.Index(n);
  std::copy_n(frames_[first], dim_, centroids_.Row(0).begin());
  ParallelFor(n, config_.workers, [&](size_t b, size_t e) {
    for (size_t i = b; i < e; ++i)
      min_d2[i] = kern.squared_distance(frames_[i], frames_[first], dim_);
  });
  for (size_t c = 1; c < k_; ++c) {
    double total = 0.0;
    for (double d : min_d2) total += d;
    if (!(total > 0.0))
      throw DataError("training data has fewer than K=" + std::to_string(k_) +
                      " distinct frames");
    double target = rng.Unit() * total;
    size_t pick = n;
    size_t last_positive = n;
    double cum = 0.0;
    for (size_t i = 0; i < n; ++i) {
      if (min_d2[i] <= 0.0) continue;
      last_positive = i;
      cum += min_d2[i];
      if (cum > target) {
        pick = i;
        break;
      }
    }
    if (pick == n) pick = last_positive;
    std::copy_n(frames_[pick], dim_, centroids_.Row(c).begin());
    const float *chosen = frames_[pick];
    ParallelFor(n, config_.workers, [&](size_t b, size_t e) {
      for (size_t i = b; i < e; ++i)
        min_d2[i] = std::min(min_d2[i], kern.squared_distance(frames_[i], chosen, dim_));
    });
  }
}

double EmaTrainer::Assign() {
  ParallelFor(frames_.size(), config_.workers, [&](size_t b, size_t e) {
    for (size_t i = b; i < e; ++i)
      assign_[i] = static_cast<uint32_t>(NearestCentroid(Frame(i), centroids_, &dist_[i]));
  });
  double total = 0.0;
  for (double d : dist_) total += d;
  return total / static_cast<double>(frames_.size());
}

void EmaTrainer::EmaUpdate() {
  std::vector<double> batch_counts(k_, 0.0), batch_sums(k_ * dim_, 0.0);
  for (size_t i = 0; i < frames_.size(); ++i) {
    size_t c = assign_[i];
    batch_counts[c] += 1.0;
    double *dst = &batch_sums[c * dim_];
    const float *x = frames_[i];
    for (size_t j = 0; j < dim_; ++j) dst[j] += x[j];
  }
  const double decay = config_.decay;
  for (size_t c = 0; c < k_; ++c) {
    counts_[c] = decay * counts_[c] + (1.0 - decay) * batch_counts[c];
    for (size_t j = 0; j < dim_; ++j)
      sums_[c * dim_ + j] = decay * sums_[c * dim_ + j] + (1.0 - decay) * batch_sums[c * dim_ + j];
  }
  RecomputeCentroids();
}

void EmaTrainer::RecomputeCentroids() {
  double total = 0.0;
  for (double c : counts_) total += c;
  const double eps = config_.epsilon;
  const double denom = total + static_cast<double>(k_) * eps;
  for (size_t c = 0; c < k_; ++c) {
    // Laplace-smoothed cluster size.
    double smoothed = (counts_[c] + eps) / denom * total;
    auto row = centroids_.Row(c);
    for (size_t j = 0; j < dim_; ++j)
      row[j] = static_cast<float>(sums_[c * dim_ + j] / smoothed);
  }
}

size_t EmaTrainer::ReseedDeadCodes(Rng &rng, double *error) {
  double total = 0.0;
  for (double c : counts_) total += c;
  const double share = total / static_cast<double>(k_);
  std::vector<size_t> dead;
  for (size_t c = 0; c < k_; ++c)
    if (counts_[c] < config_.dead_code_fraction * share) dead.push_back(c);
  if (dead.empty()) return 0;

  Matrix saved_centroids = centroids_;
  std::vector<double> saved_counts = counts_, saved_sums = sums_;
  std::vector<uint32_t> saved_assign = assign_;
  std::vector<double> saved_dist = dist_;

  // Draw replacement frames with probability proportional to their current
  // error, so every pick differs from all existing centroids.
  const auto &kern = kernels::Active();
  std::vector<double> weight = dist_;
  size_t placed = 0;
  for (size_t c : dead) {
    double sum = 0.0;
    for (double w : weight) sum += w;
    if (!(sum > 0.0)) break;
    double target = rng.Unit() * sum, cum = 0.0;
    size_t pick = frames_.size(), last_positive = frames_.size();
    for (size_t i = 0; i < frames_.size(); ++i) {
      if (weight[i] <= 0.0) continue;
      last_positive = i;
      cum += weight[i];
      if (cum > target) {
        pick = i;
        break;
      }
    }
    if (pick == frames_.size()) pick = last_positive;
    const float *x = frames_[pick];
    counts_[c] = share;
    for (size_t j = 0; j < dim_; ++j) sums_[c * dim_ + j] = share * x[j];
    for (size_t i = 0; i < frames_.size(); ++i)
      weight[i] = std::min(weight[i], kern.squared_distance(frames_[i], x, dim_));
    ++placed;
  }
  if (placed == 0) return 0;
  RecomputeCentroids();
  double trial = Assign();
  if (trial <= *error) {
    *error = trial;
    return placed;
  }
  centroids_ = std::move(saved_centroids);
  counts_ = std::move(saved_counts);
  sums_ = std::move(saved_sums);
  assign_ = std::move(saved_assign);
  dist_ = std::move(saved_dist);
  return 0;
}

Codebook EmaTrainer::Finish() const {
  Codebook cb;
  cb.centroids = centroids_;
  cb.ema_counts.resize(k_);
  std::vector<float> sums(k_ * dim_);
  for (size_t c = 0; c < k_; ++c) cb.ema_counts[c] = static_cast<float>(counts_[c]);
  for (size_t i = 0; i < sums.size(); ++i) sums[i] = static_cast<float>(sums_[i]);
  cb.ema_sums = Matrix(k_, dim_, std::move(sums));
  cb.decay = config_.decay;
  cb.epsilon = config_.epsilon;
  return cb;
}

}  // namespace

Codebook TrainCodebook(std::span<const FeatureSequence> data, size_t codebook_size,
                       const TrainConfig &config, TrainLog *log) {
  if (codebook_size < 2) throw ConfigError("codebook size must be at least 2");
  if (!(config.decay > 0.0 && config.decay < 1.0)) throw ConfigError("decay must be in (0, 1)");
  if (!(config.epsilon > 0.0)) throw ConfigError("epsilon must be positive");
  if (config.epochs < 1) throw ConfigError("epochs must be at least 1");
  if (config.max_frames < 1) throw ConfigError("max_frames must be at least 1");
  if (data.empty()) throw DataError("no training sequences");

  const size_t dim = data[0].Dim();
  std::vector<const float *> frames;
  for (const auto &seq : data) {
    seq.Validate();
    if (seq.Dim() != dim)
      throw DataError("training sequences disagree on dimension (" + std::to_string(dim) +
                      " vs " + std::to_string(seq.Dim()) + ")");
    for (size_t t = 0; t < seq.NumFrames(); ++t) frames.push_back(seq.frames.Row(t).data());
  }
  if (frames.size() < codebook_size)
    throw DataError("only " + std::to_string(frames.size()) + " training frames for K=" +
                    std::to_string(codebook_size));

  if (frames.size() > config.max_frames) {
    Rng sub(DeriveSeed(config.seed, "subsample"));
    std::vector<size_t> idx(frames.size());
    std::iota(idx.begin(), idx.end(), size_t{0});
    for (size_t i = 0; i < config.max_frames; ++i)
      std::swap(idx[i], idx[i + sub.Index(idx.size() - i)]);
    idx.resize(config.max_frames);
    std::sort(idx.begin(), idx.end());
    std::vector<const float *> kept;
    kept.reserve(idx.size());
    for (size_t i : idx) kept.push_back(frames[i]);
    frames = std::move(kept);
  }
  if (frames.size() < codebook_size)
    throw DataError("max_frames leaves fewer frames than K=" + std::to_string(codebook_size));

  TrainLog local_log;
  TrainLog &out_log = log ? *log : local_log;
  out_log = TrainLog{};
  out_log.frames_used = frames.size();

  EmaTrainer trainer(std::move(frames), dim, codebook_size, config);
  Rng init_rng(DeriveSeed(config.seed, "kmeans++"));
  trainer.SeedPlusPlus(init_rng);
  Rng reseed_rng(DeriveSeed(config.seed, "reseed"));

  double error = trainer.Assign();
  out_log.errors.push_back(error);
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    trainer.EmaUpdate();
    double next = trainer.Assign();
    out_log.reseeded.push_back(trainer.ReseedDeadCodes(reseed_rng, &next));
    out_log.errors.push_back(next);
    double improvement = error - next;
    error = next;
    if (improvement < config.early_stop_tol) {
      out_log.early_stopped = true;
      break;
    }
  }
  return trainer.Finish();
}

}  // namespace dsrt
