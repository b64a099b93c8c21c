// tests/quantizer-test.cc

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

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "dsrt/error.h"
#include "dsrt/io-util.h"
#include "dsrt/quantizer.h"
#include "oracles.h"
#include "test-util.h"

namespace dsrt {
namespace {

using testing::ClusterData;
using testing::TempDir;

TrainConfig Config(uint64_t seed, int epochs = 20) {
  TrainConfig c;
  c.seed = seed;
  c.epochs = epochs;
  c.workers = 1;
  return c;
}

TEST_CASE("training error is non-increasing") {
  for (uint64_t seed = 1; seed <= 5; ++seed) {
    Rng rng(seed);
    auto data = ClusterData(rng, 12, 6, 1500, 4.0);
    TrainLog log;
    TrainCodebook(data, 16, Config(seed), &log);
    REQUIRE(log.errors.size() >= 2);
    for (size_t e = 1; e < log.errors.size(); ++e) CHECK(log.errors[e] <= log.errors[e - 1] + 1e-9);
    CHECK(log.frames_used == 1500);
  }
}

TEST_CASE("training is deterministic") {
  Rng rng(4);
  auto data = ClusterData(rng, 8, 5, 800, 3.0);
  TrainConfig c = Config(17);
  Codebook a = TrainCodebook(data, 8, c), b = TrainCodebook(data, 8, c);
  CHECK(EncodeCodebook(a) == EncodeCodebook(b));
  c.workers = 3;
  CHECK(EncodeCodebook(TrainCodebook(data, 8, c)) == EncodeCodebook(a));
  c.seed = 18;
  CHECK(EncodeCodebook(TrainCodebook(data, 8, c)) != EncodeCodebook(a));
}

TEST_CASE("N = K distinct points reach zero error") {
  Rng rng(2);
  FeatureSequence seq{testing::RandomMatrix(rng, 8, 3), 50.0f};
  std::vector<FeatureSequence> data{seq};
  Codebook cb = TrainCodebook(data, 8, Config(1, 100));
  CHECK(MeanQuantizationError(data, cb) < 1e-8);
}

TEST_CASE("two one-dimensional clusters") {
  Rng rng(5);
  Matrix m(200, 1);
  for (size_t i = 0; i < 200; ++i)
    m(i, 0) = static_cast<float>((i % 2 ? 1.0 : -1.0) + 0.02 * (rng.Unit() - 0.5));
  std::vector<FeatureSequence> data{{m, 50.0f}};
  Codebook cb = TrainCodebook(data, 2, Config(3, 200));
  std::vector<float> c{cb.centroids(0, 0), cb.centroids(1, 0)};
  std::sort(c.begin(), c.end());
  CHECK(std::abs(c[0] + 1.0f) < 0.02f);
  CHECK(std::abs(c[1] - 1.0f) < 0.02f);
}

TEST_CASE("well separated clusters use every code") {
  Rng rng(6);
  auto data = ClusterData(rng, 16, 8, 3000, 20.0);
  Codebook cb = TrainCodebook(data, 16, Config(2, 30));
  std::set<int32_t> used;
  for (const auto &seq : data)
    for (int32_t t : Quantize(seq, cb).tokens) used.insert(t);
  CHECK(used.size() == 16);
  std::set<std::vector<float>> rows;
  for (size_t k = 0; k < cb.Size(); ++k)
    rows.insert({cb.centroids.Row(k).begin(), cb.centroids.Row(k).end()});
  CHECK(rows.size() == 16);
}

TEST_CASE("centroids follow the smoothed EMA state") {
  Rng rng(8);
  auto data = ClusterData(rng, 5, 4, 600, 5.0);
  Codebook cb = TrainCodebook(data, 6, Config(9, 10));
  double total = 0.0;
  for (float c : cb.ema_counts) total += c;
  for (size_t k = 0; k < cb.Size(); ++k) {
    double smoothed = (cb.ema_counts[k] + cb.epsilon) / (total + cb.Size() * cb.epsilon) * total;
    for (size_t j = 0; j < cb.Dim(); ++j)
      CHECK(cb.centroids(k, j) == doctest::Approx(cb.ema_sums(k, j) / smoothed).epsilon(1e-4));
  }
}

TEST_CASE("training errors") {
  std::vector<FeatureSequence> few{{Matrix(3, 2, {0, 1, 2, 3, 4, 5}), 50.0f}};
  CHECK_THROWS_AS(TrainCodebook(few, 4, Config(1)), DataError);
  std::vector<FeatureSequence> same{{Matrix(6, 1, {1, 1, 1, 1, 1, 1}), 50.0f}};
  CHECK_THROWS_AS(TrainCodebook(same, 2, Config(1)), DataError);
  std::vector<FeatureSequence> mixed{{Matrix(4, 2), 50.0f}, {Matrix(4, 3), 50.0f}};
  CHECK_THROWS_AS(TrainCodebook(mixed, 2, Config(1)), DataError);
  CHECK_THROWS_AS(TrainCodebook(few, 1, Config(1)), ConfigError);
  TrainConfig bad = Config(1);
  bad.decay = 1.0;
  CHECK_THROWS_AS(TrainCodebook(few, 2, bad), ConfigError);
}

Codebook FixedCodebook(Matrix centroids) {
  Codebook cb;
  cb.ema_counts.assign(centroids.NumRows(), 1.0f);
  cb.ema_sums = centroids;
  cb.centroids = std::move(centroids);
  return cb;
}

TEST_CASE("quantize matches the exhaustive oracle") {
  Rng rng(12);
  for (int trial = 0; trial < 20; ++trial) {
    size_t k = 2 + rng.Index(63), d = 1 + rng.Index(12);
    Codebook cb = FixedCodebook(testing::RandomMatrix(rng, k, d));
    FeatureSequence seq{testing::RandomMatrix(rng, 50, d), 50.0f};
    TokenSequence toks = Quantize(seq, cb, 2);
    REQUIRE(toks.tokens.size() == 50);
    CHECK(toks.codebook_size == k);
    for (size_t t = 0; t < 50; ++t)
      CHECK(static_cast<size_t>(toks.tokens[t]) == oracle::Nearest(seq.frames.Row(t), cb.centroids));
  }
}

TEST_CASE("quantize exact match and ties") {
  Codebook cb = FixedCodebook(Matrix(8, 1, {0, 10, -1, 20, 30, 1, 40, 7}));
  FeatureSequence seq{Matrix(3, 1, {7, 0, 10}), 100.0f};
  auto toks = Quantize(seq, cb).tokens;
  CHECK(toks == std::vector<int32_t>{7, 0, 1});
  CHECK(Quantize(FeatureSequence{Matrix(1, 1, {0}), 100.0f},
                 FixedCodebook(Matrix(6, 1, {9, 9, 1, 9, 9, -1})))
            .tokens[0] == 2);
  CHECK_THROWS_AS(Quantize(FeatureSequence{Matrix(1, 2), 100.0f}, cb), DataError);
}

TEST_CASE("tokens to vectors") {
  Codebook cb = FixedCodebook(Matrix(2, 3, {1, 2, 3, 4, 5, 6}));
  TokenSequence toks{{0, 0, 1}, 2, 50.0f};
  FeatureSequence v = TokensToVectors(toks, cb);
  CHECK(v.frames == Matrix(3, 3, {1, 2, 3, 1, 2, 3, 4, 5, 6}));
  CHECK(v.frame_rate_hz == 50.0f);
  FeatureSequence oh = TokensToVectors(toks, cb, TokenEmbedding::kOneHot);
  CHECK(oh.frames == Matrix(3, 2, {1, 0, 1, 0, 0, 1}));
  CHECK_THROWS_AS(TokensToVectors(TokenSequence{{2}, 2, 50.0f}, cb), DataError);
  CHECK_THROWS_AS(TokensToVectors(TokenSequence{{-1}, 2, 50.0f}, cb), DataError);

  FeatureSequence centroid_seq{Matrix(2, 3, {4, 5, 6, 1, 2, 3}), 50.0f};
  CHECK(TokensToVectors(Quantize(centroid_seq, cb), cb).frames == centroid_seq.frames);
}

TEST_CASE("round-trip error equals the independently measured error") {
  Rng rng(21);
  auto data = ClusterData(rng, 6, 4, 400, 3.0);
  Codebook cb = TrainCodebook(data, 8, Config(4, 5));
  double sum = 0.0;
  size_t n = 0;
  for (const auto &seq : data) {
    FeatureSequence rec = TokensToVectors(Quantize(seq, cb), cb);
    for (size_t t = 0; t < seq.NumFrames(); ++t, ++n)
      for (size_t j = 0; j < seq.Dim(); ++j) {
        double diff = static_cast<double>(seq.frames(t, j)) - rec.frames(t, j);
        sum += diff * diff;
      }
  }
  CHECK(MeanQuantizationError(data, cb) == doctest::Approx(sum / n).epsilon(1e-12));
}

TEST_CASE("codebook files") {
  TempDir dir("codebook");
  Rng rng(30);
  auto data = ClusterData(rng, 4, 3, 300, 3.0);
  Codebook cb = TrainCodebook(data, 4, Config(1, 3));
  SaveCodebook(cb, dir / "cb.vqcb");
  Codebook back = LoadCodebook(dir / "cb.vqcb");
  CHECK(back.centroids == cb.centroids);
  CHECK(back.ema_counts == cb.ema_counts);
  CHECK(back.ema_sums == cb.ema_sums);
  auto bytes = ReadFileBytes(dir / "cb.vqcb");
  CHECK(bytes.size() == 12 + (4 * 3 * 2 + 4) * 4);

  auto truncated = bytes;
  truncated.pop_back();
  CHECK_THROWS_WITH_AS(DecodeCodebook(truncated), doctest::Contains("truncated"), DataError);
  auto trailing = bytes;
  trailing.push_back(0);
  CHECK_THROWS_AS(DecodeCodebook(trailing), DataError);
  auto magic = bytes;
  magic[1] = 'X';
  CHECK_THROWS_WITH_AS(DecodeCodebook(magic), doctest::Contains("magic"), DataError);
  CHECK_THROWS_AS(LoadCodebook(dir / "missing.vqcb"), Error);
}

}  // namespace
}  // namespace dsrt
