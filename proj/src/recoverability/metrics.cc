// src/recoverability/metrics.cc

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
#include <cmath>

#include "dsrt/dtw.h"
#include "dsrt/error.h"
#include "dsrt/kernels.h"
#include "dsrt/recoverability.h"

namespace dsrt {

double CosineSimilarity(std::span<const float> u, std::span<const float> v) {
  kernels::DotNorms p = kernels::DotAndNorms(u, v);
  if (p.norm_u == 0.0 || p.norm_v == 0.0)
    throw DataError("cosine similarity of a zero vector");
  return std::clamp(p.dot / std::sqrt(p.norm_u * p.norm_v), -1.0, 1.0);
}

double JsDivergence(std::span<const float> p, std::span<const float> q, double base) {
  if (p.size() != q.size())
    throw DataError("distribution sizes differ (" + std::to_string(p.size()) + " vs " +
                    std::to_string(q.size()) + ")");
  if (!(base > 0.0 && base != 1.0)) throw ConfigError("JS divergence base must be > 0 and != 1");
  double sum = 0.0;
  for (size_t i = 0; i < p.size(); ++i) {
    double pi = p[i], qi = q[i], mi = 0.5 * (pi + qi);
    double tp = pi > 0.0 ? pi * std::log(pi / mi) : 0.0;
    double tq = qi > 0.0 ? qi * std::log(qi / mi) : 0.0;
    sum += tp + tq;
  }
  double jsd = std::max(0.0, 0.5 * sum / std::log(base));
  if (base > 1.0) jsd = std::min(jsd, std::log(2.0) / std::log(base));
  return jsd;
}

double JsDistance(std::span<const float> p, std::span<const float> q, double base) {
  return std::sqrt(JsDivergence(p, q, base));
}

double PpgJsDistance(const FeatureSequence &p, const FeatureSequence &q, double base) {
  ValidatePpg(p);
  ValidatePpg(q);
  if (p.Dim() != q.Dim())
    throw DataError("PPG class counts differ (" + std::to_string(p.Dim()) + " vs " +
                    std::to_string(q.Dim()) + ")");
  CostMatrix cost;
  cost.rows = p.NumFrames();
  cost.cols = q.NumFrames();
  cost.values.resize(cost.rows * cost.cols);
  for (size_t i = 0; i < cost.rows; ++i)
    for (size_t j = 0; j < cost.cols; ++j)
      cost.values[i * cost.cols + j] = JsDistance(p.frames.Row(i), q.frames.Row(j), base);
  return Dtw(cost).Mean();
}

EditCounts AlignWords(const std::vector<std::string> &ref, const std::vector<std::string> &hyp) {
  const size_t n = ref.size(), m = hyp.size();
  // cell = (cost, substitutions, deletions, insertions)
  struct Cell {
    size_t cost = 0, sub = 0, del = 0, ins = 0;
  };
  std::vector<Cell> prev(m + 1), cur(m + 1);
  for (size_t j = 0; j <= m; ++j) prev[j] = {j, 0, 0, j};
  for (size_t i = 1; i <= n; ++i) {
    cur[0] = {i, 0, i, 0};
    for (size_t j = 1; j <= m; ++j) {
      bool same = ref[i - 1] == hyp[j - 1];
      Cell diag = prev[j - 1];
      if (!same) {
        ++diag.cost;
        ++diag.sub;
      }
      Cell del = prev[j];
      ++del.cost;
      ++del.del;
      Cell ins = cur[j - 1];
      ++ins.cost;
      ++ins.ins;
      Cell best = diag;
      if (del.cost < best.cost) best = del;
      if (ins.cost < best.cost) best = ins;
      cur[j] = best;
    }
    std::swap(prev, cur);
  }
  const Cell &c = prev[m];
  return EditCounts{c.sub, c.del, c.ins, n};
}

double WordErrorRate(std::string_view ref_text, std::string_view hyp_text) {
  std::vector<std::string> ref = TokenizeTranscript(ref_text);
  if (ref.empty()) throw DataError("WER reference has no words");
  EditCounts c = AlignWords(ref, TokenizeTranscript(hyp_text));
  return static_cast<double>(c.Errors()) / static_cast<double>(c.reference_length);
}

std::string WerPoolingName(WerPooling pooling) {
  return pooling == WerPooling::kTokens ? "tokens" : "utterances";
}

WerPooling ParseWerPooling(const std::string &name) {
  if (name == "tokens") return WerPooling::kTokens;
  if (name == "utterances") return WerPooling::kUtterances;
  throw ConfigError("unknown wer_pooling '" + name + "' (expected tokens or utterances)");
}

double CorpusWordErrorRate(const std::vector<EditCounts> &counts, WerPooling pooling) {
  if (counts.empty()) throw DataError("corpus WER of no utterances");
  double errors = 0.0, words = 0.0, rate_sum = 0.0;
  for (const EditCounts &c : counts) {
    if (c.reference_length == 0) throw DataError("WER reference has no words");
    errors += static_cast<double>(c.Errors());
    words += static_cast<double>(c.reference_length);
    rate_sum += static_cast<double>(c.Errors()) / static_cast<double>(c.reference_length);
  }
  return pooling == WerPooling::kTokens ? errors / words
                                        : rate_sum / static_cast<double>(counts.size());
}

}  // namespace dsrt
