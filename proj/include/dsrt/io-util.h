// include/dsrt/io-util.h

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

#ifndef DSRT_IO_UTIL_H_
#define DSRT_IO_UTIL_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace dsrt {

std::vector<unsigned char> ReadFileBytes(const std::filesystem::path &path);
// Writes via a temporary sibling and renames it into place.
void WriteFileBytes(const std::filesystem::path &path, const std::vector<unsigned char> &bytes);
void WriteTextFile(const std::filesystem::path &path, const std::string &text);

// Little-endian encoder, independent of host byte order.
class ByteWriter {
 public:
  void Raw(const void *data, size_t n);
  void U32(uint32_t v);
  void F32(float v);
  std::vector<unsigned char> Take() { return std::move(bytes_); }

 private:
  std::vector<unsigned char> bytes_;
};

// Little-endian decoder; throws DataError("<what>: truncated ...") on
// reads past the end.
class ByteReader {
 public:
  ByteReader(const std::vector<unsigned char> &bytes, std::string what)
      : bytes_(bytes), what_(std::move(what)) {}
  void Skip(size_t n);
  uint32_t U32();
  float F32();
  size_t Remaining() const { return bytes_.size() - pos_; }

 private:
  void Need(size_t n) const;
  const std::vector<unsigned char> &bytes_;
  std::string what_;
  size_t pos_ = 0;
};

}  // namespace dsrt

#endif  // DSRT_IO_UTIL_H_
