// include/dsrt/matrix.h

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

#ifndef DSRT_MATRIX_H_
#define DSRT_MATRIX_H_

#include <cstddef>
#include <span>
#include <vector>

namespace dsrt {

// Dense row-major float matrix.
class Matrix {
 public:
  Matrix() = default;
  Matrix(size_t rows, size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0.0f) {}
  Matrix(size_t rows, size_t cols, std::vector<float> data);

  size_t NumRows() const { return rows_; }
  size_t NumCols() const { return cols_; }
  bool Empty() const { return rows_ == 0 || cols_ == 0; }

  std::span<const float> Row(size_t r) const { return {data_.data() + r * cols_, cols_}; }
  std::span<float> Row(size_t r) { return {data_.data() + r * cols_, cols_}; }

  float operator()(size_t r, size_t c) const { return data_[r * cols_ + c]; }
  float &operator()(size_t r, size_t c) { return data_[r * cols_ + c]; }

  const std::vector<float> &Data() const { return data_; }
  std::vector<float> &Data() { return data_; }

  // Copy of rows [begin, end).
  Matrix RowRange(size_t begin, size_t end) const;

  bool AllFinite() const;

  friend bool operator==(const Matrix &, const Matrix &) = default;

 private:
  size_t rows_ = 0;
  size_t cols_ = 0;
  std::vector<float> data_;
};

}  // namespace dsrt

#endif  // DSRT_MATRIX_H_
