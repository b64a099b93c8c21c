// tests/test-util.h

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

#ifndef DSRT_TESTS_TEST_UTIL_H_
#define DSRT_TESTS_TEST_UTIL_H_

#include <ctime>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "dsrt/corpus.h"
#include "dsrt/matrix.h"
#include "dsrt/rng.h"

namespace dsrt {
namespace testing {

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string &tag) {
    Rng rng(reinterpret_cast<uintptr_t>(this) ^ static_cast<uint64_t>(::time(nullptr)));
    path_ = std::filesystem::temp_directory_path() /
            ("dsrt-" + tag + "-" + std::to_string(rng.NextU64() % 1000000007ULL));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir &) = delete;
  TempDir &operator=(const TempDir &) = delete;
  const std::filesystem::path &path() const { return path_; }
  std::filesystem::path operator/(const std::string &name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline Matrix RandomMatrix(Rng &rng, size_t rows, size_t cols, double scale = 1.0) {
  Matrix m(rows, cols);
  for (size_t r = 0; r < rows; ++r)
    for (size_t c = 0; c < cols; ++c) m(r, c) = static_cast<float>(scale * rng.Gaussian());
  return m;
}

inline std::vector<float> RandomVector(Rng &rng, size_t n, double scale = 1.0) {
  std::vector<float> v(n);
  for (float &x : v) x = static_cast<float>(scale * rng.Gaussian());
  return v;
}

// `clusters` Gaussian blobs of unit spread around centres of spread `separation`,
// split over a few sequences.
inline std::vector<FeatureSequence> ClusterData(Rng &rng, size_t clusters, size_t dim,
                                                size_t frames, double separation) {
  Matrix centres = RandomMatrix(rng, clusters, dim, separation);
  std::vector<FeatureSequence> out;
  size_t left = frames;
  while (left > 0) {
    size_t t = std::min<size_t>(left, 50 + rng.Index(100));
    Matrix m(t, dim);
    for (size_t i = 0; i < t; ++i) {
      size_t c = rng.Index(clusters);
      for (size_t j = 0; j < dim; ++j) m(i, j) = centres(c, j) + static_cast<float>(rng.Gaussian());
    }
    out.push_back({std::move(m), 50.0f});
    left -= t;
  }
  return out;
}

inline std::string ReadText(const std::filesystem::path &p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace testing
}  // namespace dsrt

#endif  // DSRT_TESTS_TEST_UTIL_H_
