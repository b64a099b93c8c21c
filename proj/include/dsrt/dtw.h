// include/dsrt/dtw.h

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

#ifndef DSRT_DTW_H_
#define DSRT_DTW_H_

#include <cstddef>
#include <span>
#include <vector>

#include "dsrt/matrix.h"

namespace dsrt {

// Angular distance arccos(cos(u, v)) / pi in [0, 1].  A zero vector is at
// distance 0.5 from any nonzero vector and 0 from another zero vector.
double FrameDistance(std::span<const float> u, std::span<const float> v);

// Local cost matrix for DTW, rows x cols, row-major.
struct CostMatrix {
  size_t rows = 0, cols = 0;
  std::vector<double> values;
  double operator()(size_t i, size_t j) const { return values[i * cols + j]; }
};

// All pairwise FrameDistance values between the rows of a and b.
CostMatrix AngularCostMatrix(const Matrix &a, const Matrix &b);

struct DtwResult {
  double total_cost = 0.0;  // accumulated along the path, in path order
  size_t path_length = 0;   // number of cells on the path
  double Mean() const { return total_cost / static_cast<double>(path_length); }
};

// Monotone alignment from (0,0) to (rows-1, cols-1) with steps
// (1,1), (0,1), (1,0) that minimizes the accumulated cost; among equal
// costs the shorter path wins.
DtwResult Dtw(const CostMatrix &cost);

// Mean frame distance along the optimal path.  Throws DataError on empty
// input or a dimension mismatch.  Symmetric in its arguments.
double DtwDistance(const Matrix &a, const Matrix &b);

}  // namespace dsrt

#endif  // DSRT_DTW_H_
