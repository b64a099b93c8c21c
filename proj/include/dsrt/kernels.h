// include/dsrt/kernels.h

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

#ifndef DSRT_KERNELS_H_
#define DSRT_KERNELS_H_

#include <cstddef>
#include <span>

namespace dsrt {
namespace kernels {

// Dot product plus both squared norms, accumulated in double.
struct DotNorms {
  double dot = 0.0;
  double norm_u = 0.0;  // sum u_i^2
  double norm_v = 0.0;  // sum v_i^2
};

// One implementation of every inner-loop primitive.  All variants
// accumulate in double; they differ only in summation order, so results
// agree to a few ulps rather than bitwise.
struct KernelTable {
  const char *name;
  double (*dot)(const float *u, const float *v, size_t n);
  DotNorms (*dot_norms)(const float *u, const float *v, size_t n);
  double (*squared_distance)(const float *u, const float *v, size_t n);
  double (*squared_norm)(const float *u, size_t n);
};

const KernelTable &Scalar();

// Null when the variant was not compiled in or the CPU lacks the
// instruction set.
const KernelTable *Avx2();
const KernelTable *Neon();

// Variant used by the library.  Chosen once per process: the widest
// supported variant, unless the DSRT_KERNELS environment variable names
// one of "scalar", "avx2", "neon".
const KernelTable &Active();

// Checked span wrappers over Active().  Throw DataError on size mismatch.
double Dot(std::span<const float> u, std::span<const float> v);
DotNorms DotAndNorms(std::span<const float> u, std::span<const float> v);
double SquaredDistance(std::span<const float> u, std::span<const float> v);
double SquaredNorm(std::span<const float> u);

}  // namespace kernels
}  // namespace dsrt

#endif  // DSRT_KERNELS_H_
