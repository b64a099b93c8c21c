// src/kernels/kernels-internal.h

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

#ifndef DSRT_KERNELS_KERNELS_INTERNAL_H_
#define DSRT_KERNELS_KERNELS_INTERNAL_H_

#include "dsrt/kernels.h"

namespace dsrt {
namespace kernels {

// Defined in the per-ISA translation units; null when not compiled in.
const KernelTable *Avx2TableIfCompiled();
const KernelTable *NeonTableIfCompiled();

}  // namespace kernels
}  // namespace dsrt

#endif  // DSRT_KERNELS_KERNELS_INTERNAL_H_
