// src/kernels/kernels-neon.cc

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

// AArch64 Advanced SIMD variant.  NEON is part of the AArch64 baseline,
// so no runtime check is needed beyond the compile-time guard.

#include "kernels/kernels-internal.h"

#if defined(DSRT_HAVE_NEON) && defined(__aarch64__)

#include <arm_neon.h>

namespace dsrt {
namespace kernels {
namespace {

double NeonDot(const float *u, const float *v, size_t n) {
  float64x2_t acc0 = vdupq_n_f64(0.0), acc1 = vdupq_n_f64(0.0);
  size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    float32x4_t a = vld1q_f32(u + i), b = vld1q_f32(v + i);
    acc0 = vfmaq_f64(acc0, vcvt_f64_f32(vget_low_f32(a)), vcvt_f64_f32(vget_low_f32(b)));
    acc1 = vfmaq_f64(acc1, vcvt_high_f64_f32(a), vcvt_high_f64_f32(b));
  }
  double acc = vaddvq_f64(vaddq_f64(acc0, acc1));
  for (; i < n; ++i) acc += static_cast<double>(u[i]) * static_cast<double>(v[i]);
  return acc;
}

DotNorms NeonDotNorms(const float *u, const float *v, size_t n) {
  float64x2_t d0 = vdupq_n_f64(0.0), d1 = vdupq_n_f64(0.0);
  float64x2_t nu0 = vdupq_n_f64(0.0), nu1 = vdupq_n_f64(0.0);
  float64x2_t nv0 = vdupq_n_f64(0.0), nv1 = vdupq_n_f64(0.0);
  size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    float32x4_t a = vld1q_f32(u + i), b = vld1q_f32(v + i);
    float64x2_t a0 = vcvt_f64_f32(vget_low_f32(a)), a1 = vcvt_high_f64_f32(a);
    float64x2_t b0 = vcvt_f64_f32(vget_low_f32(b)), b1 = vcvt_high_f64_f32(b);
    d0 = vfmaq_f64(d0, a0, b0);
    d1 = vfmaq_f64(d1, a1, b1);
    nu0 = vfmaq_f64(nu0, a0, a0);
    nu1 = vfmaq_f64(nu1, a1, a1);
    nv0 = vfmaq_f64(nv0, b0, b0);
    nv1 = vfmaq_f64(nv1, b1, b1);
  }
  DotNorms r;
  r.dot = vaddvq_f64(vaddq_f64(d0, d1));
  r.norm_u = vaddvq_f64(vaddq_f64(nu0, nu1));
  r.norm_v = vaddvq_f64(vaddq_f64(nv0, nv1));
  for (; i < n; ++i) {
    double a = u[i], b = v[i];
    r.dot += a * b;
    r.norm_u += a * a;
    r.norm_v += b * b;
  }
  return r;
}

double NeonSquaredDistance(const float *u, const float *v, size_t n) {
  float64x2_t acc0 = vdupq_n_f64(0.0), acc1 = vdupq_n_f64(0.0);
  size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    float32x4_t a = vld1q_f32(u + i), b = vld1q_f32(v + i);
    float64x2_t e0 = vsubq_f64(vcvt_f64_f32(vget_low_f32(a)), vcvt_f64_f32(vget_low_f32(b)));
    float64x2_t e1 = vsubq_f64(vcvt_high_f64_f32(a), vcvt_high_f64_f32(b));
    acc0 = vfmaq_f64(acc0, e0, e0);
    acc1 = vfmaq_f64(acc1, e1, e1);
  }
  double acc = vaddvq_f64(vaddq_f64(acc0, acc1));
  for (; i < n; ++i) {
    double d = static_cast<double>(u[i]) - static_cast<double>(v[i]);
    acc += d * d;
  }
  return acc;
}

double NeonSquaredNorm(const float *u, size_t n) {
  float64x2_t acc0 = vdupq_n_f64(0.0), acc1 = vdupq_n_f64(0.0);
  size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    float32x4_t a = vld1q_f32(u + i);
    float64x2_t a0 = vcvt_f64_f32(vget_low_f32(a)), a1 = vcvt_high_f64_f32(a);
    acc0 = vfmaq_f64(acc0, a0, a0);
    acc1 = vfmaq_f64(acc1, a1, a1);
  }
  double acc = vaddvq_f64(vaddq_f64(acc0, acc1));
  for (; i < n; ++i) acc += static_cast<double>(u[i]) * u[i];
  return acc;
}

}  // namespace

const KernelTable *NeonTableIfCompiled() {
  static const KernelTable table{"neon", NeonDot, NeonDotNorms,
                                 NeonSquaredDistance, NeonSquaredNorm};
  return &table;
}

}  // namespace kernels
}  // namespace dsrt

#else

namespace dsrt {
namespace kernels {
const KernelTable *NeonTableIfCompiled() { return nullptr; }
}  // namespace kernels
}  // namespace dsrt

#endif
