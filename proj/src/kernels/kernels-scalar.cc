// src/kernels/kernels-scalar.cc

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

#include "kernels/kernels-internal.h"

namespace dsrt {
namespace kernels {
namespace {

double ScalarDot(const float *u, const float *v, size_t n) {
  double acc = 0.0;
  for (size_t i = 0; i < n; ++i)
    acc += static_cast<double>(u[i]) * static_cast<double>(v[i]);
  return acc;
}

DotNorms ScalarDotNorms(const float *u, const float *v, size_t n) {
  DotNorms r;
  for (size_t i = 0; i < n; ++i) {
    double a = u[i], b = v[i];
    r.dot += a * b;
    r.norm_u += a * a;
    r.norm_v += b * b;
  }
  return r;
}

double ScalarSquaredDistance(const float *u, const float *v, size_t n) {
  double acc = 0.0;
  for (size_t i = 0; i < n; ++i) {
    double d = static_cast<double>(u[i]) - static_cast<double>(v[i]);
    acc += d * d;
  }
  return acc;
}

double ScalarSquaredNorm(const float *u, size_t n) {
  double acc = 0.0;
  for (size_t i = 0; i < n; ++i) acc += static_cast<double>(u[i]) * u[i];
  return acc;
}

}  // namespace

const KernelTable &Scalar() {
  static const KernelTable table{"scalar", ScalarDot, ScalarDotNorms,
                                 ScalarSquaredDistance, ScalarSquaredNorm};
  return table;
}

}  // namespace kernels
}  // namespace dsrt
