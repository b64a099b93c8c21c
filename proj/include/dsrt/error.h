// include/dsrt/error.h

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

#ifndef DSRT_ERROR_H_
#define DSRT_ERROR_H_

#include <stdexcept>
#include <string>

namespace dsrt {

// Base of all errors raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or inconsistent input data: bad files, broken manifests,
// impossible evaluation requests.  The CLI maps these to exit code 2.
class DataError : public Error {
 public:
  using Error::Error;
};

// Invalid configuration or usage.  The CLI maps these to exit code 1.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Prints "WARNING: <msg>" to stderr.
void Warn(const std::string &msg);

}  // namespace dsrt

#endif  // DSRT_ERROR_H_
