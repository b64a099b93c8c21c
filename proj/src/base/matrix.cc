// src/base/matrix.cc

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

#include "dsrt/matrix.h"

#include <cmath>
#include <string>

#include "dsrt/error.h"

namespace dsrt {

Matrix::Matrix(size_t rows, size_t cols, std::vector<float> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows_ * cols_)
    throw DataError("matrix data size " + std::to_string(data_.size()) +
                    " does not match shape " + std::to_string(rows_) + "x" +
                    std::to_string(cols_));
}

Matrix Matrix::RowRange(size_t begin, size_t end) const {
  if (begin > end || end > rows_) throw DataError("row range out of bounds");
  std::vector<float> out(data_.begin() + static_cast<std::ptrdiff_t>(begin * cols_),
                         data_.begin() + static_cast<std::ptrdiff_t>(end * cols_));
  return Matrix(end - begin, cols_, std::move(out));
}

bool Matrix::AllFinite() const {
  for (float v : data_)
    if (!std::isfinite(v)) return false;
  return true;
}

}  // namespace dsrt
