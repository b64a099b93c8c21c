// include/dsrt/parallel.h

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

#ifndef DSRT_PARALLEL_H_
#define DSRT_PARALLEL_H_

#include <cstddef>
#include <functional>

namespace dsrt {

// Maps 0 (meaning "all cores") to std::thread::hardware_concurrency().
int ResolveWorkers(int requested);

// Calls fn(begin, end) on contiguous, non-overlapping blocks covering
// [0, n).  Callers write results into per-index slots and reduce them in
// index order afterwards, so outputs never depend on the worker count.
// The first exception thrown by any block is rethrown on the caller.
void ParallelFor(size_t n, int workers,
                 const std::function<void(size_t, size_t)> &fn);

}  // namespace dsrt

#endif  // DSRT_PARALLEL_H_
