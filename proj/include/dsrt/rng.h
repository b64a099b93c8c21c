// include/dsrt/rng.h

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

#ifndef DSRT_RNG_H_
#define DSRT_RNG_H_

#include <cstdint>
#include <random>
#include <string_view>

namespace dsrt {

// Seeded generator whose outputs are identical on every platform.  The
// engine is std::mt19937_64 (fully specified by the standard); the
// distributions are implemented here because std::uniform_*_distribution
// are implementation-defined.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  uint64_t NextU64() { return engine_(); }
  // Uniform integer in [0, n); n must be > 0.
  uint64_t Index(uint64_t n);
  // Uniform double in [0, 1).
  double Unit();
  double Gaussian();

  template <typename It>
  void Shuffle(It begin, It end) {
    auto n = static_cast<uint64_t>(end - begin);
    for (uint64_t i = n; i > 1; --i) {
      uint64_t j = Index(i);
      std::swap(begin[i - 1], begin[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

// Stable 64-bit FNV-1a hash; used to derive per-item seeds.
uint64_t Fnv1a64(std::string_view bytes, uint64_t basis = 0xcbf29ce484222325ULL);

// Mixes a run seed with a string key into an independent stream seed.
uint64_t DeriveSeed(uint64_t seed, std::string_view key);

}  // namespace dsrt

#endif  // DSRT_RNG_H_
