// Copyright 2026 The forge Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <string>

namespace forge::cli {

// Runs one tool given plain argv where argv[0] is the module name
// (textnorm, asciiart, placeholder, subword, align, lm, qefilter, eval,
// run).  Returns the process exit code: 0 ok, 1 usage/config error,
// 2 data error.
int run_module(const std::string& module, int argc, const char* const* argv);

// Entry point for the multiplexed `forge` binary.
int run_forge(int argc, const char* const* argv);

}  // namespace forge::cli
