// Copyright 2026 The clinee Authors.
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

// Command-line entry point shared by the `clinee` binary and the tests.
//
//   clinee build-dataset        BRAT directory -> dataset, ontology, split, stats
//   clinee compile-prompts      dataset -> prompt JSONL (training export or inference)
//   clinee run-pipeline         dataset -> predictions
//   clinee evaluate             predictions + gold -> report
//   clinee downsample-experiment
//
// Exit status: 0 success, 1 usage or validation error, 2 backend failure.

#ifndef CLINEE_CLI_H_
#define CLINEE_CLI_H_

#include <string>
#include <vector>

namespace clinee {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 1;
inline constexpr int kExitBackend = 2;

// `args` excludes the program name. Diagnostics go to standard error; data
// goes to the files named by flags.
int RunCli(const std::vector<std::string> &args);

}  // namespace clinee

#endif  // CLINEE_CLI_H_
