// include/dsrt/cli.h

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

#ifndef DSRT_CLI_H_
#define DSRT_CLI_H_

namespace dsrt {

// Entry point of the dsrt-eval tool.  Returns the process exit code:
// 0 success, 1 usage or configuration error, 2 data error.
int RunDsrtEval(int argc, const char *const *argv);

}  // namespace dsrt

#endif  // DSRT_CLI_H_
