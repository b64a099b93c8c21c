// src/kernels/kernels-avx2.cc

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

// Compiled with -mavx2 -mfma; only reached after a runtime CPU check.

#include "kernels/kernels-internal.h"

#if defined(DSRT_HAVE_AVX2)

#include <immintrin.h>

namespace dsrt {
namespace kernels {
namespace {

inline double HorizontalSum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d swapped = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, swapped));
}

// Widens 8 floats into two vectors of 4 doubles.
inline void Widen(const float *p, __m256d *lo, __m256d *hi) {
  __m256 x = _mm256_loadu_ps(p);
  *lo = _mm256_cvtps_pd(_mm256_castps256_ps128(x));
  *hi = _mm256_cvtps_pd(_mm256_extractf128_ps(x, 1));
}

double Avx2Dot(const float *u, const float *v, size_t n) {
  __m256d acc0 = _mm256_setzero_pd(), acc1 = _mm256_setzero_pd();
  size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    __m256d u0, u1, v0, v1;
    Widen(u + i, &u0, &u1);
    Widen(v + i, &v0, &v1);
    acc0 = _mm256_fmadd_pd(u0, v0, acc0);
    acc1 = _mm256_fmadd_pd(u1, v1, acc1);
  }
  double acc = HorizontalSum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) acc += static_cast<double>(u[i]) * static_cast<double>(v[i]);
  return acc;
}

DotNorms Avx2DotNorms(const float *u, const float *v, size_t n) {
  __m256d dot0 = _mm256_setzero_pd(), dot1 = _mm256_setzero_pd();
  __m256d nu0 = _mm256_setzero_pd(), nu1 = _mm256_setzero_pd();
  __m256d nv0 = _mm256_setzero_pd(), nv1 = _mm256_setzero_pd();
  size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    __m256d u0, u1, v0, v1;
    Widen(u + i, &u0, &u1);
    Widen(v + i, &v0, &v1);
    dot0 = _mm256_fmadd_pd(u0, v0, dot0);
    dot1 = _mm256_fmadd_pd(u1, v1, dot1);
    nu0 = _mm256_fmadd_pd(u0, u0, nu0);
    nu1 = _mm256_fmadd_pd(u1, u1, nu1);
    nv0 = _mm256_fmadd_pd(v0, v0, nv0);
    nv1 = _mm256_fmadd_pd(v1, v1, nv1);
  }
  DotNorms r;
  r.dot = HorizontalSum(_mm256_add_pd(dot0, dot1));
  r.norm_u = HorizontalSum(_mm256_add_pd(nu0, nu1));
  r.norm_v = HorizontalSum(_mm256_add_pd(nv0, nv1));
  for (; i < n; ++i) {
    double a = u[i], b = v[i];
    r.dot += a * b;
    r.norm_u += a * a;
    r.norm_v += b * b;
  }
  return r;
}

double Avx2SquaredDistance(const float *u, const float *v, size_t n) {
  __m256d acc0 = _mm256_setzero_pd(), acc1 = _mm256_setzero_pd();
  size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    __m256d u0, u1, v0, v1;
    Widen(u + i, &u0, &u1);
    Widen(v + i, &v0, &v1);
    __m256d d0 = _mm256_sub_pd(u0, v0);
    __m256d d1 = _mm256_sub_pd(u1, v1);
    acc0 = _mm256_fmadd_pd(d0, d0, acc0);
    acc1 = _mm256_fmadd_pd(d1, d1, acc1);
  }
  double acc = HorizontalSum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) {
    double d = static_cast<double>(u[i]) - static_cast<double>(v[i]);
    acc += d * d;
  }
  return acc;
}

double Avx2SquaredNorm(const float *u, size_t n) {
  __m256d acc0 = _mm256_setzero_pd(), acc1 = _mm256_setzero_pd();
  size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    __m256d u0, u1;
    Widen(u + i, &u0, &u1);
    acc0 = _mm256_fmadd_pd(u0, u0, acc0);
    acc1 = _mm256_fmadd_pd(u1, u1, acc1);
  }
  double acc = HorizontalSum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) acc += static_cast<double>(u[i]) * u[i];
  return acc;
}

}  // namespace

const KernelTable *Avx2TableIfCompiled() {
  static const KernelTable table{"avx2", Avx2Dot, Avx2DotNorms,
                                 Avx2SquaredDistance, Avx2SquaredNorm};
  return &table;
}

}  // namespace kernels
}  // namespace dsrt

#else

namespace dsrt {
namespace kernels {
const KernelTable *Avx2TableIfCompiled() { return nullptr; }
}  // namespace kernels
}  // namespace dsrt

#endif
