// src/abx/dtw.cc

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

#include "dsrt/dtw.h"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "dsrt/error.h"
#include "dsrt/kernels.h"

namespace dsrt {

namespace {

double AngleFromParts(double dot, double norm_u, double norm_v) {
  bool zero_u = norm_u == 0.0, zero_v = norm_v == 0.0;
  if (zero_u && zero_v) return 0.0;
  if (zero_u || zero_v) return 0.5;
  // sqrt(x*x) == x exactly, so identical vectors give cos == 1.
  double cos = dot / std::sqrt(norm_u * norm_v);
  cos = std::clamp(cos, -1.0, 1.0);
  return std::acos(cos) / std::numbers::pi;
}

}  // namespace

double FrameDistance(std::span<const float> u, std::span<const float> v) {
  kernels::DotNorms p = kernels::DotAndNorms(u, v);
  return AngleFromParts(p.dot, p.norm_u, p.norm_v);
}

CostMatrix AngularCostMatrix(const Matrix &a, const Matrix &b) {
  if (a.NumCols() != b.NumCols())
    throw DataError("DTW inputs differ in dimension (" + std::to_string(a.NumCols()) + " vs " +
                    std::to_string(b.NumCols()) + ")");
  const auto &k = kernels::Active();
  const size_t dim = a.NumCols();
  CostMatrix cost{a.NumRows(), b.NumRows(), std::vector<double>(a.NumRows() * b.NumRows())};
  for (size_t i = 0; i < a.NumRows(); ++i) {
    const float *u = a.Row(i).data();
    for (size_t j = 0; j < b.NumRows(); ++j) {
      kernels::DotNorms p = k.dot_norms(u, b.Row(j).data(), dim);
      cost.values[i * cost.cols + j] = AngleFromParts(p.dot, p.norm_u, p.norm_v);
    }
  }
  return cost;
}

DtwResult Dtw(const CostMatrix &cost) {
  if (cost.rows == 0 || cost.cols == 0) throw DataError("DTW on an empty sequence");
  const size_t cols = cost.cols;
  // Two rolling rows of (accumulated cost, path length).
  std::vector<double> prev_cost(cols), cur_cost(cols);
  std::vector<size_t> prev_len(cols), cur_len(cols);

  auto better = [](double c1, size_t l1, double c2, size_t l2) {
    return c1 < c2 || (c1 == c2 && l1 < l2);
  };

  for (size_t i = 0; i < cost.rows; ++i) {
    for (size_t j = 0; j < cols; ++j) {
      const double local = cost(i, j);
      if (i == 0 && j == 0) {
        cur_cost[0] = local;
        cur_len[0] = 1;
        continue;
      }
      // Candidates are compared after adding the local cost so that ties
      // created by rounding resolve to the shorter path.
      bool have = false;
      double best_c = 0.0;
      size_t best_l = 0;
      auto consider = [&](double c, size_t l) {
        c += local;
        ++l;
        if (!have || better(c, l, best_c, best_l)) {
          best_c = c;
          best_l = l;
          have = true;
        }
      };
      if (i > 0 && j > 0) consider(prev_cost[j - 1], prev_len[j - 1]);
      if (j > 0) consider(cur_cost[j - 1], cur_len[j - 1]);
      if (i > 0) consider(prev_cost[j], prev_len[j]);
      cur_cost[j] = best_c;
      cur_len[j] = best_l;
    }
    std::swap(prev_cost, cur_cost);
    std::swap(prev_len, cur_len);
  }
  return {prev_cost[cols - 1], prev_len[cols - 1]};
}

double DtwDistance(const Matrix &a, const Matrix &b) {
  if (a.Empty() || b.Empty()) throw DataError("DTW on an empty sequence");
  return Dtw(AngularCostMatrix(a, b)).Mean();
}

}  // namespace dsrt
