// src/kernels/kernels.cc

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

#include "dsrt/kernels.h"

#include <cstdlib>
#include <string>

#include "dsrt/error.h"
#include "kernels/kernels-internal.h"

namespace dsrt {
namespace kernels {

const KernelTable *Avx2() {
#if defined(__x86_64__) || defined(__i386__)
  static const bool supported =
      __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  return supported ? Avx2TableIfCompiled() : nullptr;
#else
  return nullptr;
#endif
}

const KernelTable *Neon() { return NeonTableIfCompiled(); }

namespace {

const KernelTable &Select() {
  const char *env = std::getenv("DSRT_KERNELS");
  std::string want = env ? env : "auto";
  if (want == "scalar") return Scalar();
  if (want == "avx2") {
    if (const KernelTable *t = Avx2()) return *t;
    Warn("DSRT_KERNELS=avx2 requested but unavailable; using scalar kernels");
    return Scalar();
  }
  if (want == "neon") {
    if (const KernelTable *t = Neon()) return *t;
    Warn("DSRT_KERNELS=neon requested but unavailable; using scalar kernels");
    return Scalar();
  }
  if (want != "auto") Warn("unknown DSRT_KERNELS value '" + want + "'; ignoring");
  if (const KernelTable *t = Avx2()) return *t;
  if (const KernelTable *t = Neon()) return *t;
  return Scalar();
}

void CheckSizes(size_t a, size_t b) {
  if (a != b)
    throw DataError("vector dimension mismatch: " + std::to_string(a) + " vs " +
                    std::to_string(b));
}

}  // namespace

const KernelTable &Active() {
  static const KernelTable &table = Select();
  return table;
}

double Dot(std::span<const float> u, std::span<const float> v) {
  CheckSizes(u.size(), v.size());
  return Active().dot(u.data(), v.data(), u.size());
}

DotNorms DotAndNorms(std::span<const float> u, std::span<const float> v) {
  CheckSizes(u.size(), v.size());
  return Active().dot_norms(u.data(), v.data(), u.size());
}

double SquaredDistance(std::span<const float> u, std::span<const float> v) {
  CheckSizes(u.size(), v.size());
  return Active().squared_distance(u.data(), v.data(), u.size());
}

double SquaredNorm(std::span<const float> u) {
  return Active().squared_norm(u.data(), u.size());
}

}  // namespace kernels
}  // namespace dsrt
